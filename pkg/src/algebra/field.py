"""
Aritmetica en el campo primo F_q con modulo elegido en tiempo de ejecucion
"""

from typing import Iterable, List

from pydantic import BaseModel, ConfigDict, Field

from ..models.errors import DivisionByZero, NotPrime


# Un elemento del campo es un int canonico en [0, q)
FieldElement = int

# Bases de Miller-Rabin deterministas para n < 3.3e24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Miller-Rabin determinista (exacto a escala de escritorio)"""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Menor primo >= n"""
    candidate = max(n, 2)
    while not is_prime(candidate):
        candidate += 1
    return candidate


class PrimeField(BaseModel):
    """Especificacion de F_q; todas las operaciones devuelven representantes canonicos"""
    model_config = ConfigDict(frozen=True)

    q: int = Field(..., ge=2)  # Modulo primo

    def element(self, value: int) -> FieldElement:
        return value % self.q

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return (a + b) % self.q

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return (a - b) % self.q

    def neg(self, a: FieldElement) -> FieldElement:
        return -a % self.q

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return a * b % self.q

    def pow(self, a: FieldElement, exponent: int) -> FieldElement:
        if exponent < 0:
            raise ValueError(f"Exponente negativo no soportado: {exponent}")
        return pow(a, exponent, self.q)

    def inverse(self, a: FieldElement) -> FieldElement:
        """
        Inverso multiplicativo por el pequeno teorema de Fermat

        Raises:
            DivisionByZero: si a = 0 en F_q
        """
        a %= self.q
        if a == 0:
            raise DivisionByZero(f"El cero no tiene inverso en F_{self.q}")
        return pow(a, self.q - 2, self.q)

    def div(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return a * self.inverse(b) % self.q

    def elements(self, values: Iterable[int]) -> List[FieldElement]:
        return [v % self.q for v in values]


def make_field(q: int) -> PrimeField:
    """
    Construir y validar la especificacion de un campo primo

    Args:
        q: Modulo candidato

    Returns:
        PrimeField validado

    Raises:
        NotPrime: si q es compuesto o menor que 2
    """
    if not is_prime(q):
        raise NotPrime(f"El modulo {q} no es primo")
    return PrimeField(q=q)

