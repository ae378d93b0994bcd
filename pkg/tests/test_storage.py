"""
Pruebas del almacenamiento de Lagrange y de la aleatoriedad del dealer
"""

import itertools

import pytest

from src.models.errors import ModeOff, NotEnoughShares, ShapeMismatch
from src.models.schemas import Database
from src.protocol.params import build_context
from src.protocol.randomness import RandomSource
from src.protocol.storage import (
    StorageDealer, generate_database, reconstruct_from_shares, storage_basis, zero_randomness,
)


def test_generate_database_shape(demo_ctx, demo_db):
    assert set(demo_db.files) == set(demo_ctx.file_indices)
    for matrix in demo_db.files.values():
        assert len(matrix) == 3 and all(len(row) == 2 for row in matrix)
        assert all(0 <= v < 17 for row in matrix for v in row)


def test_storage_basis_is_kronecker(demo_ctx):
    for i, row in enumerate(demo_ctx.points.beta):
        for ell, basis in enumerate(storage_basis(demo_ctx, i)):
            assert [basis(b) for b in row] == [1 if k == ell else 0 for k in range(len(row))]


def test_repetition_storage(small_params):
    """Prueba K=1, X=0, lambda=1: cada servidor guarda el simbolo en claro"""
    ctx = build_context(small_params)
    db = Database(q=3, M=1, F=(2,), lam=1, K=1, files={(1,): [[2]], (2,): [[1]]})
    shares = StorageDealer(ctx, RandomSource(1)).encode_database(db).shares
    assert [share.values[(1,)] for share in shares] == [[2], [2]]
    assert [share.values[(2,)] for share in shares] == [[1], [1]]


def test_reconstruct_from_every_minimal_subset(demo_ctx, demo_db):
    """Prueba reconstruir cada fila desde todo subconjunto de K+X = 4 servidores"""
    shares = StorageDealer(demo_ctx, RandomSource(3)).encode_database(demo_db).shares
    for subset in itertools.combinations(shares, 4):
        for index in demo_ctx.file_indices:
            for i in range(demo_ctx.derived.lam):
                assert reconstruct_from_shares(demo_ctx, subset, index, i) == demo_db.file(index)[i]


def test_reconstruct_needs_enough_shares(demo_ctx, demo_db):
    shares = StorageDealer(demo_ctx, RandomSource(3)).encode_database(demo_db).shares
    with pytest.raises(NotEnoughShares):
        reconstruct_from_shares(demo_ctx, shares[:3], (1, 1), 0)


def test_storage_polynomials_in_audit_mode(demo_ctx, demo_db):
    """Prueba grado <= K+X-1, datos en beta_{i,j} y fragmentos en alpha_n"""
    encoded = StorageDealer(demo_ctx, RandomSource(3), audit_mode=True).encode_database(demo_db)
    assert len(encoded.polynomials) == 4 * 3
    for (index, i), phi in encoded.polynomials.items():
        assert phi.degree <= 3
        assert phi.evaluate_many(demo_ctx.points.beta[i][:2]) == demo_db.file(index)[i]
        assert [share.values[index][i] for share in encoded.shares] == phi.evaluate_many(demo_ctx.points.alpha)


def test_storage_polynomials_hidden_outside_audit_mode(demo_ctx, demo_db):
    assert StorageDealer(demo_ctx, RandomSource(3)).encode_database(demo_db).polynomials is None


def test_encode_is_deterministic(demo_ctx, demo_db):
    first = StorageDealer(demo_ctx, RandomSource(5)).encode_database(demo_db).shares
    second = StorageDealer(demo_ctx, RandomSource(5)).encode_database(demo_db).shares
    other = StorageDealer(demo_ctx, RandomSource(6)).encode_database(demo_db).shares
    assert first == second
    assert first != other


def test_encode_rejects_foreign_database(demo_ctx):
    """Prueba que una base con otra forma no se codifica"""
    db = Database(q=17, M=2, F=(2, 2), lam=3, K=1, files={
        index: [[0], [0], [0]] for index in demo_ctx.file_indices
    })
    with pytest.raises(ShapeMismatch):
        StorageDealer(demo_ctx, RandomSource(1)).encode_database(db)


def test_round_randomness(demo_ctx):
    """Prueba psi^s: 7 ruidos, cero en la columna beta_{.,s}, igual al ruido en alpha_1..7"""
    dealer = StorageDealer(demo_ctx, RandomSource(9), audit_mode=True)
    for s in (1, 2):
        randomness = dealer.generate_round_randomness(s)
        psi = randomness.polynomial
        assert len(randomness.noise) == 7
        assert psi.degree <= 9
        assert [psi(row[s - 1]) for row in demo_ctx.points.beta] == [0, 0, 0]
        values = [share.value for share in randomness.shares]
        assert values[:7] == randomness.noise
        assert values == psi.evaluate_many(demo_ctx.points.alpha)
        assert [share.server_id for share in randomness.shares] == list(range(1, 14))


def test_round_randomness_hidden_outside_audit_mode(demo_ctx):
    randomness = StorageDealer(demo_ctx, RandomSource(9)).generate_round_randomness(1)
    assert randomness.polynomial is None and randomness.noise is None
    assert len(randomness.shares) == 13


def test_round_randomness_requires_server_privacy(demo_ctx):
    ctx = build_context(demo_ctx.params.model_copy(update={"server_privacy": False}))
    with pytest.raises(ModeOff):
        StorageDealer(ctx, RandomSource(1)).generate_round_randomness(1)
    assert {share.value for share in zero_randomness(ctx, 1)} == {0}


def test_round_randomness_rejects_bad_round(demo_ctx):
    with pytest.raises(ValueError):
        StorageDealer(demo_ctx, RandomSource(1)).generate_round_randomness(3)


def test_database_validation():
    """Prueba que la base rechaza archivos faltantes y simbolos fuera del campo"""
    with pytest.raises(ValueError):
        Database(q=3, M=1, F=(2,), lam=1, K=1, files={(1,): [[2]]})
    with pytest.raises(ValueError):
        Database(q=3, M=1, F=(2,), lam=1, K=1, files={(1,): [[2]], (2,): [[5]]})


def test_generate_database_is_seeded(demo_ctx):
    assert generate_database(demo_ctx, RandomSource(1)) == generate_database(demo_ctx, RandomSource(1))
