"""
Calculo honesto de respuestas y envoltorios de adversario (bizantino y no responsivo)
"""

import logging
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..algebra.field import PrimeField
from ..algebra.polynomial import Poly, lagrange_basis
from ..models.errors import MissingQuery
from ..models.schemas import (
    AdversaryConfig, ByzantineStrategy, RoundAnswer, RoundQuery, RoundRandomnessShare,
    SchemeContext, ServerState, StorageShare,
)


logger = logging.getLogger(__name__)


def build_intermediate_polys(ctx: SchemeContext, s: int) -> List[Poly]:
    """phi_j^s de grado lambda-1 con phi_j^s(beta_{i,s}) = delta_{ij}"""
    if not 1 <= s <= ctx.derived.S:
        raise ValueError(f"Ronda {s} fuera de [1, {ctx.derived.S}]")
    column = [row[s - 1] for row in ctx.points.beta]
    return [lagrange_basis(ctx.field, column, j) for j in range(ctx.derived.lam)]


class ServerNode:
    """Servidor honesto: solo ve su fragmento, su aleatoriedad y las consultas que recibe"""

    def __init__(self, ctx: SchemeContext, state: ServerState):
        self.ctx = ctx
        self.state = state
        self.alpha = ctx.points.alpha[state.server_id - 1]

    def compute_answer(
        self,
        queries: Sequence[RoundQuery],
        intermediate: Sequence[Poly],
        s: int,
    ) -> RoundAnswer:
        """
        A_n^s = sum_f sum_j phi_j^s(alpha_n) * prod_m Q_j^{(f_m),m,s}(alpha_n)
                * phi_j^{(f)}(alpha_n) + psi^s(alpha_n)

        Raises:
            MissingQuery: si falta la consulta de algun usuario para (n, s)
        """
        ctx, n = self.ctx, self.state.server_id
        q = ctx.derived.q
        by_user = {
            query.user_id: query.values
            for query in queries
            if query.server_id == n and query.round == s
        }
        missing = [m for m in range(1, ctx.params.M + 1) if m not in by_user]
        if missing:
            raise MissingQuery(f"Servidor {n}, ronda {s}: faltan consultas de los usuarios {missing}")

        weights = [phi(self.alpha) for phi in intermediate]
        stored = self.state.storage.values
        total = 0
        for index in ctx.file_indices:
            shares = stored[index]
            for j, weight in enumerate(weights):
                term = weight * shares[j] % q
                for m, f_m in enumerate(index, start=1):
                    term = term * by_user[m][f_m - 1][j] % q
                total += term
        total += self.state.randomness.get(s, 0)
        return RoundAnswer(server_id=n, round=s, value=total % q)


def apply_adversary(
    answer: RoundAnswer,
    cfg: AdversaryConfig,
    field: PrimeField,
    rng: np.random.Generator,
) -> RoundAnswer:
    """Borrar la respuesta de un no responsivo o corromper la de un bizantino"""
    n = answer.server_id
    if n in cfg.unresponsive:
        return RoundAnswer(server_id=n, round=answer.round, value=None)
    if n not in cfg.byzantine or answer.value is None:
        return answer
    if cfg.strategy == ByzantineStrategy.UNIFORM_RANDOM:
        value = int(rng.integers(0, field.q))
    elif cfg.strategy == ByzantineStrategy.ADDITIVE_OFFSET:
        value = field.add(answer.value, cfg.constant % field.q)
    else:
        value = cfg.constant % field.q
    return RoundAnswer(server_id=n, round=answer.round, value=value)


def answer_polynomial(
    ctx: SchemeContext,
    storage_polys: Mapping[Tuple[Tuple[int, ...], int], Poly],
    query_polys: Mapping[int, Mapping[Tuple[int, int], Poly]],
    intermediate: Sequence[Poly],
    psi: Optional[Poly] = None,
) -> Poly:
    """
    Oraculo simbolico de A^s(alpha) armado desde los polinomios en claro
    (solo disponible en modo auditoria)
    """
    total = Poly.zero(ctx.field)
    for index in ctx.file_indices:
        for j, phi in enumerate(intermediate):
            term = phi * storage_polys[(index, j)]
            for m, f_m in enumerate(index, start=1):
                term = term * query_polys[m][(f_m, j)]
            total = total + term
    if psi is not None:
        total = total + psi
    return total


def build_server_states(
    shares: Sequence[StorageShare], randomness: Dict[int, Sequence[RoundRandomnessShare]]
) -> List[ServerState]:
    """Repartir fragmentos y aleatoriedad de cada ronda entre los servidores"""
    states = []
    for share in shares:
        per_round = {
            s: round_shares[share.server_id - 1].value
            for s, round_shares in randomness.items()
        }
        states.append(ServerState(server_id=share.server_id, storage=share, randomness=per_round))
    return states
