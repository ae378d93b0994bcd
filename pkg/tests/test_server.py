"""
Pruebas del calculo de respuestas y del adversario
"""

import numpy as np
import pytest

from src.algebra.polynomial import Poly
from src.algebra.rscode import ReceivedWord, rs_decode, rs_encode
from src.models.errors import MissingQuery
from src.models.schemas import AdversaryConfig, ByzantineStrategy, RoundAnswer, ServerState, StorageShare
from src.protocol.client import UserClient, new_user_state
from src.protocol.params import build_context
from src.protocol.randomness import RandomSource
from src.protocol.server import (
    ServerNode, answer_polynomial, apply_adversary, build_intermediate_polys, build_server_states,
)
from src.protocol.storage import StorageDealer, zero_randomness


def _setup(ctx, db, seed=3, theta=(1, 2)):
    """Reparto completo en modo auditoria (polinomios en claro disponibles)"""
    rng = RandomSource(seed)
    dealer = StorageDealer(ctx, rng, audit_mode=True)
    encoded = dealer.encode_database(db)
    randomness = {s: dealer.generate_round_randomness(s) for s in range(1, ctx.derived.S + 1)}
    states = build_server_states(encoded.shares, {s: r.shares for s, r in randomness.items()})
    users = [UserClient(ctx, new_user_state(ctx, m, theta[m - 1], rng)) for m in range(1, ctx.params.M + 1)]
    return encoded, randomness, [ServerNode(ctx, state) for state in states], users


def test_intermediate_polys_identity(demo_ctx):
    """Prueba phi_j^s(beta_{i,s}) = delta_ij con grado lambda - 1"""
    for s in (1, 2):
        column = [row[s - 1] for row in demo_ctx.points.beta]
        phis = build_intermediate_polys(demo_ctx, s)
        assert [[phi(b) for b in column] for phi in phis] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        assert all(phi.degree == 2 for phi in phis)


def test_intermediate_polys_single_row(small_params):
    ctx = build_context(small_params)
    assert build_intermediate_polys(ctx, 1) == [Poly.constant(ctx.field, 1)]


def test_honest_answers_match_symbolic_oracle(demo_ctx, demo_db):
    """Prueba A_n^s = A^s(alpha_n) con A^s de grado 9 armado en claro"""
    encoded, randomness, servers, users = _setup(demo_ctx, demo_db)
    for s in (1, 2):
        queries = [qr for user in users for qr in user.emit_queries(s)]
        intermediate = build_intermediate_polys(demo_ctx, s)
        query_polys = {user.state.user_id: user.build_query_polynomials(s) for user in users}
        oracle = answer_polynomial(demo_ctx, encoded.polynomials, query_polys, intermediate, randomness[s].polynomial)
        assert oracle.degree <= demo_ctx.answer_dimension - 1
        answers = [server.compute_answer(queries, intermediate, s).value for server in servers]
        assert answers == oracle.evaluate_many(demo_ctx.points.alpha)


def test_oracle_evaluates_desired_symbols_on_beta(demo_ctx, demo_db):
    """Prueba A^s(beta_{i,s}) = w_{theta, i, s}"""
    encoded, randomness, _, users = _setup(demo_ctx, demo_db, theta=(2, 1))
    intermediate = build_intermediate_polys(demo_ctx, 2)
    query_polys = {user.state.user_id: user.build_query_polynomials(2) for user in users}
    oracle = answer_polynomial(demo_ctx, encoded.polynomials, query_polys, intermediate, randomness[2].polynomial)
    desired = demo_db.file((2, 1))
    assert [oracle(row[1]) for row in demo_ctx.points.beta] == [desired[i][1] for i in range(3)]


def test_honest_answers_form_a_codeword(demo_ctx, demo_db):
    _, _, servers, users = _setup(demo_ctx, demo_db)
    queries = [qr for user in users for qr in user.emit_queries(1)]
    intermediate = build_intermediate_polys(demo_ctx, 1)
    answers = [server.compute_answer(queries, intermediate, 1).value for server in servers]
    word = ReceivedWord(symbols=answers, points=demo_ctx.points.alpha)
    decoded = rs_decode(word, demo_ctx.answer_dimension, demo_ctx.field)
    assert rs_encode(decoded, demo_ctx.points.alpha) == answers


def test_missing_query(demo_ctx, demo_db):
    _, _, servers, users = _setup(demo_ctx, demo_db)
    queries = users[0].emit_queries(1)
    with pytest.raises(MissingQuery):
        servers[0].compute_answer(queries, build_intermediate_polys(demo_ctx, 1), 1)


def test_single_file_database_collapses(small_params):
    """Prueba F=1 sin ruido: la respuesta es phi * share * Q, sin suma sobre archivos"""
    params = small_params.model_copy(update={"F": (1,)})
    ctx = build_context(params)
    share = StorageShare(server_id=1, values={(1,): [2]})
    state = ServerState(server_id=1, storage=share, randomness={1: 0})
    client = UserClient(ctx, new_user_state(ctx, 1, 1, RandomSource(2)))
    queries = client.emit_queries(1)
    answer = ServerNode(ctx, state).compute_answer(queries, build_intermediate_polys(ctx, 1), 1)
    assert answer.value == 2 * queries[0].values[0][0] % ctx.derived.q


def test_server_state_owner_check():
    with pytest.raises(ValueError):
        ServerState(server_id=2, storage=StorageShare(server_id=1, values={}))


def test_build_server_states_without_privacy(demo_ctx, demo_db):
    ctx = build_context(demo_ctx.params.model_copy(update={"server_privacy": False}))
    shares = StorageDealer(ctx, RandomSource(1)).encode_database(demo_db).shares
    states = build_server_states(shares, {1: zero_randomness(ctx, 1), 2: zero_randomness(ctx, 2)})
    assert [state.server_id for state in states] == list(range(1, 14))
    assert all(state.randomness == {1: 0, 2: 0} for state in states)


def test_apply_adversary_strategies(demo_ctx):
    field = demo_ctx.field
    rng = np.random.default_rng(0)
    honest = RoundAnswer(server_id=3, round=1, value=10)

    assert apply_adversary(honest, AdversaryConfig(), field, rng) == honest
    offset = AdversaryConfig(byzantine=(3,), strategy=ByzantineStrategy.ADDITIVE_OFFSET, constant=9)
    assert apply_adversary(honest, offset, field, rng).value == 2
    constant = AdversaryConfig(byzantine=(3,), strategy=ByzantineStrategy.CONSTANT, constant=5)
    assert apply_adversary(honest, constant, field, rng).value == 5
    random = AdversaryConfig(byzantine=(3,))
    assert 0 <= apply_adversary(honest, random, field, rng).value < 17
    mute = AdversaryConfig(unresponsive=(3,))
    assert apply_adversary(honest, mute, field, rng).value is None
    other = AdversaryConfig(byzantine=(4,), unresponsive=(5,))
    assert apply_adversary(honest, other, field, rng) == honest


def test_adversary_config_validation():
    """Prueba que los conjuntos deben ser disjuntos, sin repetidos y 1-based"""
    with pytest.raises(ValueError):
        AdversaryConfig(byzantine=(3,), unresponsive=(3,))
    with pytest.raises(ValueError):
        AdversaryConfig(byzantine=(0,))
    with pytest.raises(ValueError):
        AdversaryConfig(byzantine=(2, 2))
    assert AdversaryConfig(byzantine=(5, 2)).byzantine == (2, 5)
