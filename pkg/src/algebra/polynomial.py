"""
Polinomios densos univariados sobre F_q: interpolacion de Lagrange,
evaluacion de Horner y division con resto.
"""

from typing import Iterable, List, Sequence, Tuple, Union

from .field import FieldElement, PrimeField
from ..models.errors import DuplicateNode


# Grado del polinomio cero
NEG_INF_DEGREE = float("-inf")


class Poly:
    """
    Polinomio inmutable con coeficientes de menor a mayor grado

    Los ceros finales se recortan al construir, de modo que el polinomio
    cero tiene coeficientes vacios y grado -inf.
    """

    __slots__ = ("_field", "_coeffs")

    def __init__(self, field: PrimeField, coeffs: Iterable[int] = ()):
        q = field.q
        trimmed = [c % q for c in coeffs]
        while trimmed and trimmed[-1] == 0:
            trimmed.pop()
        self._field = field
        self._coeffs = tuple(trimmed)

    @classmethod
    def zero(cls, field: PrimeField) -> "Poly":
        return cls(field)

    @classmethod
    def constant(cls, field: PrimeField, value: int) -> "Poly":
        return cls(field, [value])

    @classmethod
    def from_roots(cls, field: PrimeField, roots: Iterable[int]) -> "Poly":
        """Producto monico de (x - r) sobre las raices dadas"""
        return cls(field, _vanishing_coeffs(field.q, list(roots)))

    @property
    def field(self) -> PrimeField:
        return self._field

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self._coeffs

    @property
    def degree(self) -> Union[int, float]:
        return len(self._coeffs) - 1 if self._coeffs else NEG_INF_DEGREE

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def __call__(self, x: FieldElement) -> FieldElement:
        q = self._field.q
        acc = 0
        for c in reversed(self._coeffs):
            acc = (acc * x + c) % q
        return acc

    def evaluate_many(self, xs: Sequence[FieldElement]) -> List[FieldElement]:
        return [self(x) for x in xs]

    def _check(self, other: "Poly") -> None:
        if self._field.q != other._field.q:
            raise ValueError(f"Campos distintos: F_{self._field.q} y F_{other._field.q}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(self._field, out)

    def __neg__(self) -> "Poly":
        return Poly(self._field, [-c for c in self._coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: Union["Poly", int]) -> "Poly":
        if isinstance(other, int):
            return Poly(self._field, [c * other for c in self._coeffs])
        self._check(other)
        if self.is_zero or other.is_zero:
            return Poly(self._field)
        q = self._field.q
        out = [0] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other._coeffs):
                out[i + j] = (out[i + j] + a * b) % q
        return Poly(self._field, out)

    __rmul__ = __mul__

    def __divmod__(self, divisor: "Poly") -> Tuple["Poly", "Poly"]:
        """Division larga; el divisor no puede ser cero"""
        self._check(divisor)
        if divisor.is_zero:
            raise ZeroDivisionError("Division por el polinomio cero")
        field = self._field
        q = field.q
        remainder = list(self._coeffs)
        d = len(divisor._coeffs) - 1
        lead_inv = field.inverse(divisor._coeffs[-1])
        if len(remainder) - 1 < d:
            return Poly(field), Poly(field, remainder)
        quotient = [0] * (len(remainder) - d)
        for shift in range(len(remainder) - 1 - d, -1, -1):
            coef = remainder[shift + d] * lead_inv % q
            quotient[shift] = coef
            if coef:
                for k, c in enumerate(divisor._coeffs):
                    remainder[shift + k] = (remainder[shift + k] - coef * c) % q
        return Poly(field, quotient), Poly(field, remainder[:d])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self._field.q == other._field.q and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self._field.q, self._coeffs))

    def __repr__(self) -> str:
        return f"Poly(q={self._field.q}, coeffs={list(self._coeffs)})"


def _vanishing_coeffs(q: int, roots: Sequence[int]) -> List[int]:
    coeffs = [1]
    for r in roots:
        shifted = [0] + coeffs
        for k, c in enumerate(coeffs):
            shifted[k] = (shifted[k] - r * c) % q
        coeffs = shifted
    return coeffs


def interpolate(field: PrimeField, nodes: Sequence[Tuple[int, int]]) -> Poly:
    """
    Interpolacion de Lagrange en O(n^2)

    Se arma el polinomio maestro prod(x - x_i) una sola vez y cada base
    sale por division sintetica entre (x - x_i).

    Args:
        field: Campo de trabajo
        nodes: Pares (x, y) con abscisas distintas

    Returns:
        Unico polinomio de grado <= len(nodes) - 1 que pasa por los nodos

    Raises:
        DuplicateNode: si dos abscisas coinciden
    """
    if not nodes:
        raise ValueError("La interpolacion necesita al menos un nodo")
    q = field.q
    xs = [x % q for x, _ in nodes]
    seen = set()
    for x in xs:
        if x in seen:
            raise DuplicateNode(f"Abscisa repetida en la interpolacion: x={x}")
        seen.add(x)

    master = _vanishing_coeffs(q, xs)
    n = len(xs)
    result = [0] * n
    for xi, (_, yi) in zip(xs, nodes):
        yi %= q
        if yi == 0:
            continue
        # master / (x - xi) por division sintetica
        basis = [0] * n
        basis[n - 1] = master[n]
        for k in range(n - 1, 0, -1):
            basis[k - 1] = (master[k] + xi * basis[k]) % q
        denom = 0
        for c in reversed(basis):
            denom = (denom * xi + c) % q
        scale = yi * field.inverse(denom) % q
        for k in range(n):
            result[k] = (result[k] + scale * basis[k]) % q
    return Poly(field, result)


def lagrange_basis(field: PrimeField, xs: Sequence[int], index: int) -> Poly:
    """Polinomio que vale 1 en xs[index] y 0 en las demas abscisas"""
    return interpolate(field, [(x, 1 if k == index else 0) for k, x in enumerate(xs)])


def evaluate(p: Poly, x: FieldElement) -> FieldElement:
    return p(x)


def evaluate_many(p: Poly, xs: Sequence[FieldElement]) -> List[FieldElement]:
    return p.evaluate_many(xs)
