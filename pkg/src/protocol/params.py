"""
Validacion de parametros, derivacion de (P, lambda, S, q) y construccion de
los puntos publicos que cumplen P1-P4
"""

import hashlib
import json
import logging
from fractions import Fraction
from typing import List, Optional, Tuple

from ..algebra.field import is_prime, next_prime
from ..config.settings import settings
from ..models.errors import FieldTooSmall, InfeasibleParams, NotPrime, ShapeMismatch
from ..models.schemas import (
    DerivedParams, PointViolation, PublicPoints, SchemeContext, SystemParams,
)


logger = logging.getLogger(__name__)


def derive_params(p: SystemParams) -> DerivedParams:
    """
    Derivar P, lambda = P, S = K, L = lambda*K y el menor primo admisible

    Args:
        p: Parametros del sistema

    Returns:
        DerivedParams

    Raises:
        InfeasibleParams: si N <= K+X+sum(T)+2B+U-1
        NotPrime: si el modulo forzado no es primo
    """
    bound = p.feasibility_bound
    if p.N <= bound:
        raise InfeasibleParams(
            f"N={p.N} debe superar K+X+sum(T)+2B+U-1={bound}"
        )
    P = p.N - bound
    if p.q is not None:
        if not is_prime(p.q):
            raise NotPrime(f"El modulo forzado {p.q} no es primo")
        q = p.q
    else:
        q = next_prime(p.N + max(p.K, P))
    if q > settings.max_modulus:
        raise InfeasibleParams(f"q={q} supera el maximo soportado {settings.max_modulus}")
    return DerivedParams(P=P, lam=P, S=p.K, L=P * p.K, q=q)


def generate_public_points(p: SystemParams, d: DerivedParams) -> PublicPoints:
    """
    Construccion ciclica: con d* = max{K, lambda},
    beta_{i,j} = (i+j-2) mod d* para j en [K], beta_{i,K+x} = alpha_x,
    alpha_n = d* + n - 1. Usa exactamente d* + N valores distintos.
    """
    d_star = max(p.K, d.lam)
    if d.q < p.N + d_star:
        raise FieldTooSmall(f"q={d.q} es menor que N + max(K, lambda) = {p.N + d_star}")
    alpha = [d_star + n - 1 for n in range(1, p.N + 1)]
    beta = []
    for i in range(1, d.lam + 1):
        row = [(i + j - 2) % d_star for j in range(1, p.K + 1)]
        row += alpha[:p.X]
        beta.append(row)
    return PublicPoints(beta=beta, alpha=alpha)


def _duplicates(values: List[int]) -> Optional[Tuple[int, int]]:
    seen = {}
    for k, v in enumerate(values):
        if v in seen:
            return seen[v], k
        seen[v] = k
    return None


def validate_points(pts: PublicPoints, p: SystemParams, d: DerivedParams) -> List[PointViolation]:
    """
    Revisar P1-P4; una violacion por condicion incumplida con indices 1-based

    Raises:
        ShapeMismatch: si beta no es lambda x (K+X) o alpha no tiene N entradas
    """
    width = p.K + p.X
    if len(pts.beta) != d.lam or any(len(row) != width for row in pts.beta) or len(pts.alpha) != p.N:
        raise ShapeMismatch(
            f"Se esperaba beta {d.lam}x{width} y alpha de largo {p.N}"
        )
    q = d.q
    beta = [[v % q for v in row] for row in pts.beta]
    alpha = [v % q for v in pts.alpha]
    violations: List[PointViolation] = []

    for i, row in enumerate(beta, start=1):
        dup = _duplicates(row)
        if dup:
            violations.append(PointViolation(
                condition="P1", indices=[i, dup[0] + 1, dup[1] + 1],
                detail=f"fila {i}: beta_{{{i},{dup[0] + 1}}} = beta_{{{i},{dup[1] + 1}}}",
            ))
    for s in range(p.K):
        column = [row[s] for row in beta]
        dup = _duplicates(column)
        if dup:
            violations.append(PointViolation(
                condition="P2", indices=[s + 1, dup[0] + 1, dup[1] + 1],
                detail=f"columna {s + 1}: filas {dup[0] + 1} y {dup[1] + 1} coinciden",
            ))
    dup = _duplicates(alpha)
    if dup:
        violations.append(PointViolation(
            condition="P3", indices=[dup[0] + 1, dup[1] + 1],
            detail=f"alpha_{dup[0] + 1} = alpha_{dup[1] + 1}",
        ))
    data_points = {row[j] for row in beta for j in range(p.K)}
    clashes = [n for n, a in enumerate(alpha, start=1) if a in data_points]
    if clashes:
        violations.append(PointViolation(
            condition="P4", indices=clashes,
            detail=f"alpha en servidores {clashes} coincide con algun beta de datos",
        ))
    return violations


def build_context(p: SystemParams) -> SchemeContext:
    """Derivar parametros y puntos publicos de una instancia"""
    d = derive_params(p)
    pts = generate_public_points(p, d)
    logger.info(
        f"Instancia N={p.N} M={p.M} K={p.K} X={p.X} T={list(p.T)} B={p.B} U={p.U}: "
        f"P={d.P}, lambda={d.lam}, S={d.S}, q={d.q}"
    )
    return SchemeContext(params=p, derived=d, points=pts)


def closed_form_rates(p: SystemParams, d: DerivedParams) -> Tuple[Fraction, Fraction]:
    """
    Formas cerradas de la tasa de recuperacion y de la tasa de secreto

    R = 1 - (K+X+sum(T)+2B-1)/(N-U); rho = (K+X+sum(T)-1)/P, o 0 sin
    privacidad de servidor.
    """
    rate = 1 - Fraction(p.K + p.X + p.sum_t + 2 * p.B - 1, p.N - p.U)
    rho = Fraction(p.K + p.X + p.sum_t - 1, d.P) if p.server_privacy else Fraction(0)
    return rate, rho


def points_digest(pts: PublicPoints) -> str:
    payload = json.dumps({"alpha": pts.alpha, "beta": pts.beta}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()
