"""
Almacenamiento de Lagrange X-seguro y aleatoriedad correlacionada del dealer
"""

import logging
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from ..algebra.polynomial import Poly, interpolate, lagrange_basis
from ..models.errors import ModeOff, NotEnoughShares, ShapeMismatch
from ..models.schemas import (
    Database, RoundRandomnessShare, SchemeContext, StorageShare,
)
from .randomness import RandomSource, Stream


logger = logging.getLogger(__name__)


class EncodedStorage(NamedTuple):
    shares: List[StorageShare]
    # Solo en modo auditoria: (archivo, fila) -> phi_i^{(f)}
    polynomials: Optional[Dict[Tuple[Tuple[int, ...], int], Poly]]


class RoundRandomness(NamedTuple):
    round: int
    shares: List[RoundRandomnessShare]
    # Solo en modo auditoria
    polynomial: Optional[Poly]
    noise: Optional[List[int]]


def storage_basis(ctx: SchemeContext, row: int) -> List[Poly]:
    """Bases de Lagrange sigma_{i,1..K+X} sobre los nodos beta de la fila i (0-based)"""
    nodes = ctx.points.beta[row]
    return [lagrange_basis(ctx.field, nodes, ell) for ell in range(len(nodes))]


def generate_database(ctx: SchemeContext, rng: RandomSource) -> Database:
    """Base de datos uniforme sembrada (sin archivos de fixture)"""
    d, p = ctx.derived, ctx.params
    files = {
        index: rng.field_elements(d.q, (d.lam, p.K), Stream.DATABASE, *index)
        for index in ctx.file_indices
    }
    return Database(q=d.q, M=p.M, F=p.F, lam=d.lam, K=p.K, files=files)


class StorageDealer:
    """
    Dealer de confianza: codifica la base de datos en fragmentos Y_n y
    reparte la aleatoriedad psi^s(alpha_n) de cada ronda
    """

    def __init__(self, ctx: SchemeContext, rng: RandomSource, audit_mode: bool = False):
        self.ctx = ctx
        self.rng = rng
        self.audit_mode = audit_mode
        # Evaluaciones sigma_{i,l}(alpha_n) por fila: [i][l][n]
        self._basis_at_alpha = [
            [basis.evaluate_many(ctx.points.alpha) for basis in storage_basis(ctx, i)]
            for i in range(ctx.derived.lam)
        ]

    def _check_database(self, db: Database) -> None:
        p, d = self.ctx.params, self.ctx.derived
        if (db.q, db.M, tuple(db.F), db.lam, db.K) != (d.q, p.M, tuple(p.F), d.lam, p.K):
            raise ShapeMismatch(
                f"Base de datos (q={db.q}, M={db.M}, F={list(db.F)}, lambda={db.lam}, K={db.K}) "
                f"incompatible con la instancia (q={d.q}, M={p.M}, F={list(p.F)}, lambda={d.lam}, K={p.K})"
            )

    def encode_database(self, db: Database, rng: Optional[RandomSource] = None) -> EncodedStorage:
        """
        Codificar cada fila i de cada archivo f con X ruidos frescos

        phi_i^{(f)} pasa por (beta_{i,j}, w_{i,j}) para j en [K] y por
        (beta_{i,K+x}, z) para x en [X]; el servidor n guarda phi_i^{(f)}(alpha_n).

        Raises:
            ShapeMismatch: si la base no corresponde a la instancia
        """
        self._check_database(db)
        rng = rng or self.rng
        ctx = self.ctx
        p, q, n_servers = ctx.params, ctx.derived.q, ctx.params.N
        values: List[Dict[Tuple[int, ...], List[int]]] = [{} for _ in range(n_servers)]
        polynomials = {} if self.audit_mode else None

        for index in ctx.file_indices:
            matrix = db.file(index)
            for server_values in values:
                server_values[index] = []
            for i, data_row in enumerate(matrix):
                noise = rng.field_elements(q, p.X, Stream.STORAGE, *index, i) if p.X else []
                symbols = list(data_row) + noise
                basis = self._basis_at_alpha[i]
                for n in range(n_servers):
                    values[n][index].append(sum(c * basis[ell][n] for ell, c in enumerate(symbols)) % q)
                if polynomials is not None:
                    polynomials[(index, i)] = interpolate(ctx.field, list(zip(ctx.points.beta[i], symbols)))

        logger.debug(f"Base de datos codificada: {ctx.file_count} archivos x {ctx.derived.lam} filas en {n_servers} servidores")
        shares = [StorageShare(server_id=n + 1, values=values[n]) for n in range(n_servers)]
        return EncodedStorage(shares=shares, polynomials=polynomials)

    def generate_round_randomness(self, s: int, rng: Optional[RandomSource] = None) -> RoundRandomness:
        """
        Polinomio de ruido psi^s: cero en beta_{i,s} e igual a z_i^s en alpha_i
        para i en [K+X+sum(T)-1]

        Raises:
            ModeOff: si la privacidad de servidor esta desactivada
        """
        ctx = self.ctx
        if not ctx.params.server_privacy:
            raise ModeOff("Sin privacidad de servidor no hay polinomio de ruido")
        if not 1 <= s <= ctx.derived.S:
            raise ValueError(f"Ronda {s} fuera de [1, {ctx.derived.S}]")
        noise = (rng or self.rng).field_elements(ctx.derived.q, ctx.noise_count, Stream.DEALER, s)
        nodes = [(row[s - 1], 0) for row in ctx.points.beta]
        nodes += list(zip(ctx.points.alpha, noise))
        psi = interpolate(ctx.field, nodes)
        shares = [
            RoundRandomnessShare(server_id=n, round=s, value=psi(alpha))
            for n, alpha in enumerate(ctx.points.alpha, start=1)
        ]
        logger.debug(f"Ronda {s}: {len(noise)} simbolos de ruido del dealer")
        if self.audit_mode:
            return RoundRandomness(s, shares, psi, noise)
        return RoundRandomness(s, shares, None, None)


def zero_randomness(ctx: SchemeContext, s: int) -> List[RoundRandomnessShare]:
    """Fragmentos nulos del modo sin privacidad de servidor"""
    return [RoundRandomnessShare(server_id=n, round=s, value=0) for n in range(1, ctx.params.N + 1)]


def reconstruct_from_shares(
    ctx: SchemeContext,
    shares: Sequence[StorageShare],
    file_index: Tuple[int, ...],
    row: int,
) -> List[int]:
    """
    Recuperar la fila `row` (0-based) del archivo a partir de >= K+X fragmentos

    Raises:
        NotEnoughShares: con menos de K+X servidores distintos
    """
    p = ctx.params
    by_server = {share.server_id: share for share in shares}
    if len(by_server) < p.K + p.X:
        raise NotEnoughShares(
            f"Se necesitan {p.K + p.X} fragmentos distintos, llegaron {len(by_server)}"
        )
    nodes = [
        (ctx.points.alpha[n - 1], share.values[tuple(file_index)][row])
        for n, share in sorted(by_server.items())
    ]
    phi = interpolate(ctx.field, nodes)
    return phi.evaluate_many(ctx.points.beta[row][:p.K])
