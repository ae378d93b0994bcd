"""
Pruebas de la decodificacion del lado usuario y del ensamblado del archivo
"""

import pytest

from src.algebra.polynomial import Poly
from src.models.errors import DecodeFailure, MissingRound, ShapeMismatch
from src.models.schemas import DecodedRound, RoundAnswer
from src.protocol.params import build_context
from src.protocol.randomness import RandomSource
from src.protocol.retrieval import assemble_file, decode_round, extract_round_symbols, recover_answer_polynomial
from src.protocol.storage import StorageDealer


def _answers(ctx, poly, s=1, corrupt=(), erase=()):
    answers = []
    for n, value in enumerate(poly.evaluate_many(ctx.points.alpha), start=1):
        if n in erase:
            value = None
        elif n in corrupt:
            value = (value + 1) % ctx.derived.q
        answers.append(RoundAnswer(server_id=n, round=s, value=value))
    return answers


def _answer_poly(ctx):
    return Poly(ctx.field, list(range(1, ctx.answer_dimension + 1)))


def test_recover_all_honest(demo_ctx):
    poly = _answer_poly(demo_ctx)
    assert recover_answer_polynomial(_answers(demo_ctx, poly), demo_ctx) == poly


def test_recover_with_one_byzantine_one_unresponsive(demo_ctx):
    poly = _answer_poly(demo_ctx)
    answers = _answers(demo_ctx, poly, corrupt=(3,), erase=(7,))
    assert recover_answer_polynomial(answers, demo_ctx) == poly


def test_recover_answers_in_any_order(demo_ctx):
    poly = _answer_poly(demo_ctx)
    answers = list(reversed(_answers(demo_ctx, poly, corrupt=(1,))))
    assert recover_answer_polynomial(answers, demo_ctx) == poly


def test_recover_beyond_bounds(demo_ctx):
    """Prueba 2 bizantinos y 1 mudo: falla o el resultado difiere del polinomio real"""
    poly = _answer_poly(demo_ctx)
    answers = _answers(demo_ctx, poly, corrupt=(1, 2), erase=(7,))
    try:
        recovered = recover_answer_polynomial(answers, demo_ctx)
    except DecodeFailure:
        return
    assert recovered != poly


def test_recover_rejects_mixed_rounds(demo_ctx):
    answers = _answers(demo_ctx, _answer_poly(demo_ctx))
    answers[0] = RoundAnswer(server_id=1, round=2, value=answers[0].value)
    with pytest.raises(ShapeMismatch):
        recover_answer_polynomial(answers, demo_ctx)


def test_extract_round_symbols(demo_ctx):
    poly = _answer_poly(demo_ctx)
    for s in (1, 2):
        expected = [poly(row[s - 1]) for row in demo_ctx.points.beta]
        assert extract_round_symbols(poly, demo_ctx, s) == expected


def test_extract_noise_only_is_zero(demo_ctx):
    """Prueba que psi^s sola no aporta nada en beta_{.,s}"""
    dealer = StorageDealer(demo_ctx, RandomSource(1), audit_mode=True)
    for s in (1, 2):
        psi = dealer.generate_round_randomness(s).polynomial
        assert extract_round_symbols(psi, demo_ctx, s) == [0, 0, 0]


def test_extract_single_row(small_params):
    ctx = build_context(small_params)
    assert extract_round_symbols(Poly(ctx.field, [2, 1]), ctx, 1) == [2]


def test_decode_round(demo_ctx):
    poly = _answer_poly(demo_ctx)
    decoded = decode_round(_answers(demo_ctx, poly, s=2, erase=(13,)), demo_ctx, 2)
    assert decoded.round == 2
    assert decoded.answer_coeffs == list(poly.coeffs)
    assert decoded.column == extract_round_symbols(poly, demo_ctx, 2)


def test_assemble_file_any_order(demo_ctx):
    rounds = [DecodedRound(round=1, answer_coeffs=[], column=[1, 2, 3]),
              DecodedRound(round=2, answer_coeffs=[], column=[4, 5, 6])]
    forward = assemble_file(rounds, (1, 2), demo_ctx)
    backward = assemble_file(list(reversed(rounds)), (1, 2), demo_ctx)
    assert forward.matrix == [[1, 4], [2, 5], [3, 6]]
    assert backward == forward
    assert forward.theta == (1, 2)


def test_assemble_file_missing_round(demo_ctx):
    rounds = [DecodedRound(round=1, answer_coeffs=[], column=[1, 2, 3])]
    with pytest.raises(MissingRound):
        assemble_file(rounds, (1, 1), demo_ctx)


def test_assemble_file_duplicate_round(demo_ctx):
    rounds = [DecodedRound(round=1, answer_coeffs=[], column=[1, 2, 3])] * 2
    with pytest.raises(MissingRound):
        assemble_file(rounds, (1, 1), demo_ctx)


def test_assemble_single_round(small_params):
    ctx = build_context(small_params)
    retrieved = assemble_file([DecodedRound(round=1, answer_coeffs=[2], column=[2])], (1,), ctx)
    assert retrieved.matrix == [[2]]
