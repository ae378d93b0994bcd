"""
Codigo Reed-Solomon sobre puntos de evaluacion arbitrarios con
decodificacion conjunta de errores y borrados (Berlekamp-Welch).
"""

import logging
from typing import List, Optional, Sequence

from pydantic import BaseModel, ConfigDict, model_validator

from .field import FieldElement, PrimeField
from .linalg import solve
from .polynomial import Poly
from ..models.errors import DecodeFailure, DegreeTooHigh, DuplicateNode


logger = logging.getLogger(__name__)

# Simbolo ausente (servidor que no respondio)
MISSING = None


class ReceivedWord(BaseModel):
    """Palabra recibida: simbolos alineados con sus puntos de evaluacion"""
    model_config = ConfigDict(frozen=True)

    symbols: List[Optional[int]]  # None marca un borrado
    points: List[int]  # Puntos alpha correspondientes

    @model_validator(mode="after")
    def check_alignment(self):
        if len(self.symbols) != len(self.points):
            raise ValueError(
                f"Simbolos ({len(self.symbols)}) y puntos ({len(self.points)}) no alinean"
            )
        return self

    @property
    def erasures(self) -> int:
        return sum(1 for s in self.symbols if s is MISSING)


def correction_capacity(n: int, k: int) -> int:
    """Errores corregibles con n simbolos presentes y dimension k"""
    return max((n - k) // 2, 0)


def rs_encode(message: Poly, points: Sequence[FieldElement]) -> List[FieldElement]:
    """Evaluar el mensaje en todos los puntos"""
    if len(set(points)) != len(points):
        raise DuplicateNode(f"Puntos de evaluacion repetidos: {list(points)}")
    if message.degree >= len(points):
        raise DegreeTooHigh(
            f"Grado {message.degree} no cabe en un codigo de longitud {len(points)}"
        )
    return message.evaluate_many(points)


def _berlekamp_welch(field: PrimeField, xs: List[int], ys: List[int], k: int, e: int) -> Optional[Poly]:
    q = field.q
    n_q = k + e
    matrix, rhs = [], []
    for x, y in zip(xs, ys):
        powers = [1] * (n_q + 1)
        for d in range(1, n_q + 1):
            powers[d] = powers[d - 1] * x % q
        # Q(x) - y * (E_0 + ... + E_{e-1} x^{e-1}) = y * x^e
        row = powers[:n_q] + [(-y * powers[d]) % q for d in range(e)]
        matrix.append(row)
        rhs.append(y * powers[e] % q)
    solution = solve(field, matrix, rhs)
    if solution is None:
        return None
    q_poly = Poly(field, solution[:n_q])
    e_poly = Poly(field, solution[n_q:] + [1])
    message, remainder = divmod(q_poly, e_poly)
    if not remainder.is_zero:
        return None
    return message


def rs_decode(word: ReceivedWord, k: int, field: PrimeField) -> Poly:
    """
    Decodificar una palabra con errores y borrados

    Los borrados se eliminan (puncionado) y sobre los simbolos restantes se
    resuelve el sistema de Berlekamp-Welch con E monico de grado e,
    bajando e hasta 0 si el sistema no tiene solucion.

    Args:
        word: Palabra recibida
        k: Dimension del codigo (grado del mensaje < k)
        field: Campo de trabajo

    Returns:
        Mensaje de grado < k a distancia <= floor((n'-k)/2) de la palabra

    Raises:
        DecodeFailure: si no existe tal mensaje
    """
    present = [(x, y % field.q) for x, y in zip(word.points, word.symbols) if y is not MISSING]
    n_present = len(present)
    if n_present < k:
        raise DecodeFailure(f"Solo {n_present} simbolos presentes para dimension {k}")
    xs = [x for x, _ in present]
    ys = [y for _, y in present]
    radius = correction_capacity(n_present, k)

    for e in range(radius, -1, -1):
        message = _berlekamp_welch(field, xs, ys, k, e)
        if message is None or message.degree >= k:
            continue
        mismatches = sum(1 for x, y in present if message(x) != y)
        if mismatches > radius:
            continue
        if mismatches:
            logger.debug(f"RS corrigio {mismatches} errores y {word.erasures} borrados")
        return message

    raise DecodeFailure(
        f"Mas errores de los corregibles: n'={n_present}, k={k}, radio={radius}"
    )
