#!/usr/bin/env python3
"""
Generador de la comparacion de tasas
Barre N para (M, K, X, T, B, U) fijos, mide la tasa del protocolo y la
contrasta con las formas cerradas de los esquemas que generaliza.
Crea rate-comparison.csv y rate-comparison.png
"""

import argparse
import sys
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from src.harness.runner import max_adversary, run_protocol  # noqa: E402
from src.models.errors import InfeasibleParams  # noqa: E402
from src.models.schemas import SystemParams  # noqa: E402
from src.protocol.params import derive_params, closed_form_rates  # noqa: E402
from src.services.audit import reference_rates  # noqa: E402


# Colores de las series
COLORS = {
    'measured': '#007BFF',    # Azul
    'formula': '#343A40',     # Gris oscuro
    'MB-XTSPIR': '#00C851',   # Verde
    'U-B-MDS-XTPIR': '#DC3545',  # Rojo
    'U-B-MDS-TPIR': '#FFD700',   # Amarillo
}


def build_table(args) -> pd.DataFrame:
    """Una fila por N factible con la tasa medida, la teorica y las de referencia"""
    rows = []
    for n in range(2, args.n_max + 1):
        params = SystemParams(
            N=n, M=len(args.t), K=args.k, X=args.x, T=args.t, B=args.b, U=args.u,
            F=[args.files] * len(args.t), server_privacy=not args.no_server_privacy,
        )
        try:
            derived = derive_params(params)
        except InfeasibleParams:
            continue
        rate, rho = closed_form_rates(params, derived)
        row = {"N": n, "q": derived.q, "R_formula": float(rate), "rho_formula": float(rho)}
        if n <= args.measure_up_to:
            transcript = run_protocol(params, adversary=max_adversary(params), seed=args.seed)
            row["R_measured"] = float(transcript.metrics.R)
        for name, values in reference_rates(params).items():
            row[f"R_{name}"] = float(values["R"])
        rows.append(row)
    return pd.DataFrame(rows)


def plot_table(table: pd.DataFrame, path: Path, title: str) -> None:
    fig, ax = plt.subplots(figsize=(10, 6))
    ax.plot(table["N"], table["R_formula"], color=COLORS['formula'], label="R teorica")
    if "R_measured" in table:
        ax.scatter(table["N"], table["R_measured"], color=COLORS['measured'], zorder=3, label="R medida")
    for column in table.columns:
        if column.startswith("R_") and column not in ("R_formula", "R_measured"):
            name = column[2:]
            ax.plot(table["N"], table[column], linestyle="--", color=COLORS.get(name), label=name)
    ax.set_xlabel("N (servidores)")
    ax.set_ylabel("Tasa de recuperacion R")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def main():
    parser = argparse.ArgumentParser(description="Comparacion de tasas por barrido de N")
    parser.add_argument("--k", type=int, default=2)
    parser.add_argument("--x", type=int, default=2)
    parser.add_argument("--t", type=lambda s: [int(v) for v in s.split(",")], default=[2, 2])
    parser.add_argument("--b", type=int, default=1)
    parser.add_argument("--u", type=int, default=1)
    parser.add_argument("--files", type=int, default=2)
    parser.add_argument("--n-max", type=int, default=30)
    parser.add_argument("--measure-up-to", type=int, default=20, help="Ejecutar el protocolo hasta este N")
    parser.add_argument("--no-server-privacy", action="store_true")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--out-dir", type=Path, default=Path("."))
    args = parser.parse_args()

    table = build_table(args)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = args.out_dir / "rate-comparison.csv"
    png_path = args.out_dir / "rate-comparison.png"
    table.to_csv(csv_path, index=False)
    title = f"K={args.k}, X={args.x}, T={args.t}, B={args.b}, U={args.u}"
    plot_table(table, png_path, title)
    print(f"✅ Tabla guardada en: {csv_path}")
    print(f"✅ Grafica guardada en: {png_path}")


if __name__ == "__main__":
    main()
