"""
Pruebas de polinomios: interpolacion, evaluacion y division
"""

import numpy as np
import pytest

from src.algebra.field import make_field
from src.algebra.polynomial import NEG_INF_DEGREE, Poly, evaluate, evaluate_many, interpolate, lagrange_basis
from src.models.errors import DuplicateNode


F17 = make_field(17)


def test_interpolate_constant():
    """Prueba que valores iguales dan el polinomio constante"""
    poly = interpolate(F17, [(0, 5), (1, 5), (2, 5)])
    assert poly.coeffs == (5,)
    assert poly.degree == 0


def test_interpolate_recovers_cubic():
    """Prueba evaluar y volver a interpolar un polinomio de grado 3"""
    original = Poly(F17, [3, 0, 11, 9])
    xs = [2, 5, 7, 13]
    recovered = interpolate(F17, list(zip(xs, evaluate_many(original, xs))))
    assert recovered == original


def test_interpolate_duplicate_node():
    with pytest.raises(DuplicateNode):
        interpolate(F17, [(3, 1), (3, 2)])


def test_interpolate_duplicate_modulo_q():
    """Prueba que las abscisas se comparan modulo q"""
    with pytest.raises(DuplicateNode):
        interpolate(F17, [(3, 1), (20, 2)])


def test_interpolate_requires_nodes():
    with pytest.raises(ValueError):
        interpolate(F17, [])


def test_zero_polynomial():
    """Prueba el polinomio cero: coeficientes vacios, grado -inf, evalua a 0"""
    zero = Poly(F17, [0, 0, 0])
    assert zero.is_zero
    assert zero.coeffs == ()
    assert zero.degree == NEG_INF_DEGREE
    assert evaluate(zero, 11) == 0


def test_evaluate_examples():
    assert evaluate(Poly(F17, [1, 1]), 16) == 0
    assert evaluate_many(Poly(F17, [2]), [0, 1, 2]) == [2, 2, 2]
    alphas = list(range(3, 16))
    assert evaluate_many(Poly(F17, [0, 1]), alphas) == alphas


def test_interpolation_contract_at_nodes():
    nodes = [(1, 4), (6, 0), (9, 16), (12, 3)]
    poly = interpolate(F17, nodes)
    assert [poly(x) for x, _ in nodes] == [y for _, y in nodes]
    assert poly.degree <= len(nodes) - 1


def test_lagrange_basis_is_kronecker():
    xs = [0, 1, 2]
    for index in range(3):
        basis = lagrange_basis(F17, xs, index)
        assert [basis(x) for x in xs] == [1 if k == index else 0 for k in range(3)]
        assert basis.degree == 2


def test_arithmetic_and_divmod():
    """Prueba que a = b * cociente + resto con grado del resto menor al divisor"""
    a = Poly(F17, [5, 3, 0, 8, 1, 2])
    b = Poly(F17, [4, 0, 1])
    quotient, remainder = divmod(a, b)
    assert b * quotient + remainder == a
    assert remainder.degree < b.degree
    assert a - a == Poly.zero(F17)
    assert (a * 3).coeffs == tuple(c * 3 % 17 for c in a.coeffs)
    assert Poly.from_roots(F17, [2, 5])(5) == 0


def test_interpolate_evaluate_identity_random():
    """Prueba interpolar tras evaluar es la identidad (1000 casos aleatorios)"""
    rng = np.random.default_rng(2024)
    primes = [17, 31, 101, 211, 65537]
    for _ in range(1000):
        field = make_field(int(rng.choice(primes)))
        n_nodes = int(rng.integers(1, 13))
        degree = int(rng.integers(0, n_nodes))
        original = Poly(field, rng.integers(0, field.q, size=degree + 1).tolist())
        xs = rng.choice(min(field.q, 500), size=n_nodes, replace=False).tolist()
        recovered = interpolate(field, list(zip(xs, evaluate_many(original, xs))))
        assert recovered == original
        assert recovered.degree <= n_nodes - 1
