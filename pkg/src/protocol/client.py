"""
Generacion de consultas de cada usuario: F_m * lambda polinomios de grado T_m
por ronda, evaluados en el alpha de cada servidor
"""

import logging
from typing import Dict, List, Tuple

from ..algebra.polynomial import Poly, interpolate
from ..models.schemas import RoundQuery, SchemeContext, UserState
from .randomness import RandomSource, Stream


logger = logging.getLogger(__name__)


def new_user_state(ctx: SchemeContext, user_id: int, theta: int, rng: RandomSource) -> UserState:
    """
    Sortear los ruidos privados del usuario: F_m * lambda * T_m por ronda

    Raises:
        ValueError: si theta no esta en [F_m]
    """
    p = ctx.params
    if not 1 <= user_id <= p.M:
        raise ValueError(f"Usuario {user_id} fuera de [1, {p.M}]")
    f_m, t_m = p.F[user_id - 1], p.T[user_id - 1]
    if not 1 <= theta <= f_m:
        raise ValueError(f"theta_{user_id}={theta} fuera de [1, {f_m}]")
    noises = {
        s: rng.field_elements(ctx.derived.q, (f_m, ctx.derived.lam, t_m), Stream.QUERY, user_id, s)
        for s in range(1, ctx.derived.S + 1)
    }
    return UserState(user_id=user_id, theta=theta, noises=noises)


class UserClient:
    """Lado usuario de una ronda: construir y emitir consultas"""

    def __init__(self, ctx: SchemeContext, state: UserState):
        self.ctx = ctx
        self.state = state

    def build_query_polynomials(self, s: int) -> Dict[Tuple[int, int], Poly]:
        """
        Q_j^{(f_m),m,s}: vale 1 en beta_{j,s} si f_m = theta_m (0 si no) y
        z_{j,t} en alpha_t para t en [T_m]

        Returns:
            Mapa (f_m 1-based, j 0-based) -> polinomio de grado <= T_m
        """
        ctx, state = self.ctx, self.state
        if not 1 <= s <= ctx.derived.S:
            raise ValueError(f"Ronda {s} fuera de [1, {ctx.derived.S}]")
        t_m = ctx.params.T[state.user_id - 1]
        alphas = ctx.points.alpha[:t_m]
        noise = state.noises[s]
        polys = {}
        for f, per_file in enumerate(noise, start=1):
            selector = 1 if f == state.theta else 0
            for j, z in enumerate(per_file):
                nodes = [(ctx.points.beta[j][s - 1], selector)] + list(zip(alphas, z))
                polys[(f, j)] = interpolate(ctx.field, nodes)
        return polys

    def emit_queries(self, s: int) -> List[RoundQuery]:
        """Una RoundQuery por servidor con las F_m * lambda evaluaciones en alpha_n"""
        ctx = self.ctx
        polys = self.build_query_polynomials(s)
        f_m = ctx.params.F[self.state.user_id - 1]
        evaluations = {key: poly.evaluate_many(ctx.points.alpha) for key, poly in polys.items()}
        queries = []
        for n in range(ctx.params.N):
            values = [
                [evaluations[(f, j)][n] for j in range(ctx.derived.lam)]
                for f in range(1, f_m + 1)
            ]
            queries.append(RoundQuery(user_id=self.state.user_id, server_id=n + 1, round=s, values=values))
        logger.debug(f"Usuario {self.state.user_id}: consultas de la ronda {s} emitidas a {ctx.params.N} servidores")
        return queries
