"""
Barrido de parametros: ejecuta cada punto factible con el adversario en las
cotas y tabula tasas medidas contra las formas cerradas
"""

import itertools
import logging
from typing import Iterable, List, Optional

import pandas as pd
from pydantic import ValidationError

from ..config.settings import settings
from ..models.errors import InfeasibleParams
from ..models.schemas import SystemParams
from ..protocol.params import derive_params, closed_form_rates
from .runner import max_adversary, run_protocol


logger = logging.getLogger(__name__)

BENCH_COLUMNS = [
    "N", "M", "K", "X", "sum_T", "B", "U", "q", "P",
    "R", "R_formula", "R_float", "rho", "rho_formula", "wall_time",
]


def bench_grid(
    n_values: Iterable[int],
    m_values: Iterable[int],
    k_values: Iterable[int],
    x_values: Iterable[int],
    t_values: Iterable[int],
    b_values: Iterable[int],
    u_values: Iterable[int],
    files: int = 2,
    server_privacy: bool = True,
) -> List[SystemParams]:
    """Puntos factibles de la grilla (T_m y F_m iguales para todos los usuarios)"""
    grid = []
    for n, m, k, x, t, b, u in itertools.product(n_values, m_values, k_values, x_values, t_values, b_values, u_values):
        try:
            params = SystemParams(N=n, M=m, K=k, X=x, T=[t] * m, B=b, U=u, F=[files] * m, server_privacy=server_privacy)
            derive_params(params)
        except (InfeasibleParams, ValidationError):
            continue
        grid.append(params)
    return grid


def run_bench(
    n_values: Iterable[int] = (10, 13, 16),
    m_values: Iterable[int] = (1, 2),
    k_values: Iterable[int] = (1, 2),
    x_values: Iterable[int] = (0, 2),
    t_values: Iterable[int] = (1, 2),
    b_values: Iterable[int] = (0, 1),
    u_values: Iterable[int] = (0, 1),
    files: int = 2,
    seed: Optional[int] = None,
    server_privacy: bool = True,
) -> pd.DataFrame:
    """
    Ejecutar el barrido

    Returns:
        DataFrame con una fila por punto factible (columnas BENCH_COLUMNS)
    """
    seed = settings.default_seed if seed is None else seed
    grid = bench_grid(n_values, m_values, k_values, x_values, t_values, b_values, u_values, files, server_privacy)
    logger.info(f"Benchmark: {len(grid)} puntos factibles")
    rows = []
    for params in grid:
        transcript = run_protocol(params, adversary=max_adversary(params), seed=seed)
        rate_formula, rho_formula = closed_form_rates(params, transcript.derived)
        metrics = transcript.metrics
        rows.append({
            "N": params.N, "M": params.M, "K": params.K, "X": params.X,
            "sum_T": params.sum_t, "B": params.B, "U": params.U,
            "q": transcript.derived.q, "P": transcript.derived.P,
            "R": str(metrics.R), "R_formula": str(rate_formula), "R_float": float(metrics.R),
            "rho": str(metrics.rho), "rho_formula": str(rho_formula),
            "wall_time": round(metrics.wall_time or 0.0, 6),
        })
    return pd.DataFrame(rows, columns=BENCH_COLUMNS)
