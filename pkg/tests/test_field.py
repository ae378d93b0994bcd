"""
Pruebas de la aritmetica en F_q
"""

import numpy as np
import pytest

from src.algebra.field import PrimeField, is_prime, make_field, next_prime
from src.models.errors import DivisionByZero, NotPrime


F17 = make_field(17)


def test_make_field_primes():
    """Prueba que los primos se aceptan, incluido el menor"""
    assert make_field(17).q == 17
    assert make_field(2).q == 2
    assert make_field(2**31 - 1).q == 2**31 - 1


@pytest.mark.parametrize("q", [16, 1, 0, 91, 561])
def test_make_field_rejects_composites(q):
    """Prueba que los compuestos (y q < 2) fallan con NotPrime"""
    with pytest.raises(NotPrime):
        make_field(q)


def test_inverse_examples():
    """Prueba los inversos del ejemplo"""
    assert F17.inverse(1) == 1
    assert F17.inverse(5) == 7
    assert F17.mul(5, 7) == 1


def test_inverse_of_zero():
    """Prueba que el cero no tiene inverso"""
    with pytest.raises(DivisionByZero):
        F17.inverse(0)
    with pytest.raises(ZeroDivisionError):
        F17.div(3, 0)


def test_basic_operations():
    """Prueba mul, add, pow y sub con vuelta modular"""
    assert F17.mul(9, 2) == 1
    assert F17.add(16, 1) == 0
    assert F17.pow(3, 0) == 1
    assert F17.sub(0, 1) == 16
    assert F17.neg(5) == 12


def test_pow_rejects_negative_exponent():
    with pytest.raises(ValueError):
        F17.pow(3, -1)


def test_every_nonzero_element_has_inverse():
    """Prueba a * a^-1 = 1 para todo a no nulo en campos pequenos"""
    for q in (2, 3, 17, 211):
        field = make_field(q)
        for a in range(1, q):
            assert field.mul(a, field.inverse(a)) == 1


def test_field_axioms_on_sampled_triples():
    """Prueba asociatividad, conmutatividad y distributividad en muestras"""
    field = make_field(2**31 - 1)
    rng = np.random.default_rng(7)
    for a, b, c in rng.integers(0, field.q, size=(500, 3)).tolist():
        assert field.add(field.add(a, b), c) == field.add(a, field.add(b, c))
        assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))
        assert field.mul(a, b) == field.mul(b, a)
        assert field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c))
        for value in (field.add(a, b), field.mul(a, b), field.sub(a, b)):
            assert 0 <= value < field.q


def test_next_prime():
    """Prueba el menor primo por encima de la cota"""
    assert next_prime(16) == 17
    assert next_prime(17) == 17
    assert next_prime(0) == 2
    assert next_prime(200) == 211
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_field_is_immutable():
    """Prueba que la especificacion del campo no se puede modificar"""
    field = PrimeField(q=17)
    with pytest.raises(Exception):
        field.q = 19
