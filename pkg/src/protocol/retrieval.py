"""
Decodificacion del lado usuario: recuperar A^s(alpha), extraer la columna s y
ensamblar el archivo deseado
"""

import logging
from typing import List, Sequence, Tuple

from ..algebra.polynomial import Poly
from ..algebra.rscode import ReceivedWord, correction_capacity, rs_decode
from ..models.errors import MissingRound, ShapeMismatch
from ..models.schemas import DecodedRound, RetrievedFile, RoundAnswer, SchemeContext


logger = logging.getLogger(__name__)


def recover_answer_polynomial(answers: Sequence[RoundAnswer], ctx: SchemeContext) -> Poly:
    """
    Decodificacion RS de las N respuestas con dimension lambda+K+X+sum(T)-1

    Raises:
        DecodeFailure: si se excedieron las cotas (B, U)
    """
    n = ctx.params.N
    by_server = {answer.server_id: answer.value for answer in answers}
    rounds = {answer.round for answer in answers}
    if len(rounds) > 1:
        raise ShapeMismatch(f"Respuestas de varias rondas mezcladas: {sorted(rounds)}")
    symbols = [by_server.get(k) for k in range(1, n + 1)]
    word = ReceivedWord(symbols=symbols, points=list(ctx.points.alpha))
    k = ctx.answer_dimension
    present = n - word.erasures
    if word.erasures:
        logger.warning(f"{word.erasures} servidores sin respuesta en la ronda {next(iter(rounds), '?')}")
    logger.debug(f"RS ({present}, {k}): radio de correccion {correction_capacity(present, k)}")
    return rs_decode(word, k, ctx.field)


def extract_round_symbols(answer_poly: Poly, ctx: SchemeContext, s: int) -> List[int]:
    """Columna s del archivo deseado: A^s(beta_{i,s}) para i en [lambda]"""
    return [answer_poly(row[s - 1]) for row in ctx.points.beta]


def decode_round(answers: Sequence[RoundAnswer], ctx: SchemeContext, s: int) -> DecodedRound:
    answer_poly = recover_answer_polynomial(answers, ctx)
    return DecodedRound(
        round=s,
        answer_coeffs=list(answer_poly.coeffs),
        column=extract_round_symbols(answer_poly, ctx, s),
    )


def assemble_file(rounds: Sequence[DecodedRound], theta: Tuple[int, ...], ctx: SchemeContext) -> RetrievedFile:
    """
    Columna s de la matriz = columna decodificada en la ronda s; el orden de
    llegada de las rondas es irrelevante

    Raises:
        MissingRound: si no hay exactamente una ronda por cada s en [S]
    """
    S = ctx.derived.S
    by_round = {}
    for decoded in rounds:
        if decoded.round in by_round:
            raise MissingRound(f"Ronda {decoded.round} repetida")
        by_round[decoded.round] = decoded
    missing = [s for s in range(1, S + 1) if s not in by_round]
    extra = sorted(set(by_round) - set(range(1, S + 1)))
    if missing or extra:
        raise MissingRound(f"Rondas faltantes {missing}, fuera de rango {extra}")
    columns = [by_round[s].column for s in range(1, S + 1)]
    matrix = [[columns[s][i] for s in range(S)] for i in range(ctx.derived.lam)]
    return RetrievedFile(theta=tuple(theta), matrix=matrix)
