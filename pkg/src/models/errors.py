"""
Excepciones del simulador de recuperacion privada de informacion
"""

from typing import Optional


class ProtocolError(Exception):
    """Error base de todo el simulador"""


class NotPrime(ProtocolError, ValueError):
    """El modulo del campo no es primo"""


class DivisionByZero(ProtocolError, ZeroDivisionError):
    """Inverso del cero en F_q"""


class DuplicateNode(ProtocolError, ValueError):
    """Dos nodos de interpolacion comparten abscisa"""


class DegreeTooHigh(ProtocolError, ValueError):
    """El mensaje no cabe en la dimension del codigo"""


class ShapeMismatch(ProtocolError, ValueError):
    """Dimensiones inconsistentes con los parametros"""


class InfeasibleParams(ProtocolError, ValueError):
    """N no supera la cota K+X+sum(T)+2B+U-1"""


class FieldTooSmall(ProtocolError, ValueError):
    """q es menor que N + max{K, lambda}"""


class NotEnoughShares(ProtocolError, ValueError):
    """Menos de K+X fragmentos para reconstruir"""


class AdversaryBoundExceeded(ProtocolError, ValueError):
    """El adversario configurado excede B o U"""


class DecodeFailure(ProtocolError):
    """La decodificacion RS no encontro un polinomio consistente"""


class RetrievalMismatch(DecodeFailure):
    """El archivo recuperado no coincide con el texto plano (detectado por el oraculo)"""


class ModeOff(ProtocolError):
    """Operacion que requiere privacidad de servidor con el modo desactivado"""


class MissingQuery(ProtocolError):
    """Falta la consulta de algun usuario para (servidor, ronda)"""


class MissingRound(ProtocolError):
    """Falta o sobra alguna ronda al ensamblar el archivo"""


class ParseError(ProtocolError, ValueError):
    """JSON invalido o que no respeta el esquema"""

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        if location:
            message = f"{message} (en {location})"
        super().__init__(message)
