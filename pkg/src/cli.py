"""
Interfaz de linea de comandos: demo, run, audit y bench

Codigos de salida: 0 exito, 2 fallo de decodificacion, 3 auditoria
fallida, 64 error de uso.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import ValidationError

from .config.logging_config import configure_logging
from .config.settings import settings
from .harness.bench import run_bench
from .harness.runner import audit_instance, run_demo, run_protocol
from .harness.serialization import database_from_json, reports_to_json, transcript_to_json
from .models.errors import DecodeFailure, ProtocolError
from .models.schemas import AdversaryConfig, AuditCheck, ByzantineStrategy, SystemParams


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DECODE_FAILURE = 2
EXIT_AUDIT_FAILURE = 3
EXIT_USAGE = 64


class UsageError(Exception):
    """Argumentos invalidos en la linea de comandos"""


class _Parser(argparse.ArgumentParser):
    # argparse sale con codigo 2 por defecto, que aqui es fallo de decodificacion
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Lista de enteros invalida: {text}")


def _strategy(text: str):
    """random | offset:C | const:C"""
    name, _, value = text.partition(":")
    try:
        strategy = ByzantineStrategy(name)
    except ValueError:
        raise argparse.ArgumentTypeError(f"Estrategia desconocida: {name}")
    if strategy == ByzantineStrategy.UNIFORM_RANDOM:
        return strategy, 1
    if not value:
        raise argparse.ArgumentTypeError(f"La estrategia {name} necesita una constante ({name}:C)")
    try:
        return strategy, int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"Constante invalida: {value}")


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=13, help="Numero de servidores N")
    parser.add_argument("--m", type=int, default=2, help="Numero de usuarios M")
    parser.add_argument("--k", type=int, default=2, help="Dimension MDS K")
    parser.add_argument("--x", type=int, default=2, help="Umbral de seguridad X")
    parser.add_argument("--t", type=_int_list, default=None, help="T1,...,TM")
    parser.add_argument("--b", type=int, default=1, help="Cota bizantina B")
    parser.add_argument("--u", type=int, default=1, help="Cota de no responsivos U")
    parser.add_argument("--files", type=_int_list, default=None, help="F1,...,FM")
    parser.add_argument("--no-server-privacy", action="store_true", help="Desactivar psi^s")
    parser.add_argument("--q", type=int, default=None, help="Forzar el modulo q")
    parser.add_argument("--seed", type=int, default=None, help="Semilla (por defecto settings.default_seed)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lagrange-spir", description="Simulador de recuperacion privada multi-usuario")
    parser.add_argument("--log-level", default=None, help="Nivel de logs")
    parser.add_argument("--log-json", action="store_true", help="Logs en JSON")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    demo = sub.add_parser("demo", help="Ejecutar el ejemplo N=13, M=2, K=2, X=2, T=(2,2), B=U=1")
    demo.add_argument("--seed", type=int, default=None)
    demo.add_argument("--json", action="store_true", help="Imprimir la transcripcion completa")

    run = sub.add_parser("run", help="Ejecutar una instancia")
    _add_param_flags(run)
    run.add_argument("--theta", type=_int_list, default=None, help="t1,...,tM")
    run.add_argument("--byz", type=_int_list, default=[], help="Servidores bizantinos")
    run.add_argument("--unresp", type=_int_list, default=[], help="Servidores que no responden")
    run.add_argument("--strategy", type=_strategy, default=(ByzantineStrategy.UNIFORM_RANDOM, 1),
                     help="random | offset:C | const:C")
    run.add_argument("--force-adversary", action="store_true",
                     help="Permitir adversarios por encima de (B, U) para provocar fallos")
    run.add_argument("--db", type=Path, default=None, help="Base de datos JSON")
    run.add_argument("--out", type=Path, default=None, help="Escribir la transcripcion aqui")

    audit = sub.add_parser("audit", help="Auditar una instancia")
    _add_param_flags(audit)
    audit.add_argument("--check", choices=[c.value for c in AuditCheck], default=AuditCheck.ALL.value)
    audit.add_argument("--trials", type=int, default=None, help="Ensayos por grupo en pruebas estadisticas")

    bench = sub.add_parser("bench", help="Barrido de parametros (CSV)")
    bench.add_argument("--n", type=_int_list, default=[10, 13, 16])
    bench.add_argument("--m", type=_int_list, default=[1, 2])
    bench.add_argument("--k", type=_int_list, default=[1, 2])
    bench.add_argument("--x", type=_int_list, default=[0, 2])
    bench.add_argument("--t", type=_int_list, default=[1, 2])
    bench.add_argument("--b", type=_int_list, default=[0, 1])
    bench.add_argument("--u", type=_int_list, default=[0, 1])
    bench.add_argument("--files", type=int, default=2, help="F_m de cada usuario")
    bench.add_argument("--no-server-privacy", action="store_true", help="Barrer la variante sin psi^s")
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--out", type=Path, default=None, help="CSV de salida (por defecto stdout)")
    bench.add_argument("--save", action="store_true", help="Guardar en settings.bench_output_dir/bench_<semilla>.csv")
    return parser


def params_from_args(args: argparse.Namespace) -> SystemParams:
    t = args.t if args.t is not None else [2] * args.m
    files = args.files if args.files is not None else [2] * args.m
    return SystemParams(
        N=args.n, M=args.m, K=args.k, X=args.x, T=t, B=args.b, U=args.u, F=files,
        server_privacy=not args.no_server_privacy, q=args.q,
    )


def _summary(transcript) -> dict:
    return {
        "q": transcript.derived.q,
        "lambda": transcript.derived.lam,
        "S": transcript.derived.S,
        "P": transcript.derived.P,
        "R": str(transcript.metrics.R),
        "rho": str(transcript.metrics.rho),
        "D": transcript.metrics.D,
        "theta": list(transcript.theta),
        "seed": transcript.seed,
        "retrieved": transcript.retrieved.matrix,
    }


def _emit(text: str, out: Optional[Path] = None) -> None:
    if out is None:
        print(text)
    else:
        out.write_text(text + "\n", encoding="utf-8")
        logger.info(f"Salida escrita en {out}")


def _cmd_demo(args) -> int:
    transcript = run_demo(seed=args.seed)
    _emit(transcript_to_json(transcript) if args.json else json.dumps(_summary(transcript), sort_keys=True))
    return EXIT_OK


def _cmd_run(args) -> int:
    params = params_from_args(args)
    strategy, constant = args.strategy
    adversary = AdversaryConfig(byzantine=args.byz, unresponsive=args.unresp, strategy=strategy, constant=constant)
    database = database_from_json(args.db.read_text(encoding="utf-8")) if args.db else None
    seed = settings.default_seed if args.seed is None else args.seed
    transcript = run_protocol(
        params, database=database, theta=args.theta, adversary=adversary, seed=seed,
        enforce_bounds=not args.force_adversary,
    )
    _emit(transcript_to_json(transcript), args.out)
    return EXIT_OK


def _cmd_audit(args) -> int:
    params = params_from_args(args)
    reports = audit_instance(params, [AuditCheck(args.check)], trials=args.trials, seed=args.seed)
    _emit(reports_to_json(reports))
    return EXIT_OK if all(report.passed for report in reports) else EXIT_AUDIT_FAILURE


def _cmd_bench(args) -> int:
    seed = settings.default_seed if args.seed is None else args.seed
    frame = run_bench(
        n_values=args.n, m_values=args.m, k_values=args.k, x_values=args.x,
        t_values=args.t, b_values=args.b, u_values=args.u, files=args.files, seed=seed,
        server_privacy=not args.no_server_privacy,
    )
    out = args.out
    if out is None and args.save:
        out = settings.bench_output_dir / f"bench_{seed}.csv"
    if out is None:
        sys.stdout.write(frame.to_csv(index=False))
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(out, index=False)
        logger.info(f"{len(frame)} filas de benchmark escritas en {out}")
    return EXIT_OK


COMMANDS = {"demo": _cmd_demo, "run": _cmd_run, "audit": _cmd_audit, "bench": _cmd_bench}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"error de uso: {e}", file=sys.stderr)
        return EXIT_USAGE

    configure_logging(level=args.log_level, json_output=args.log_json or None)
    try:
        return COMMANDS[args.command](args)
    except DecodeFailure as e:
        logger.error(f"Fallo de decodificacion: {e}")
        return EXIT_DECODE_FAILURE
    except (ValidationError, ValueError) as e:
        logger.error(f"Parametros invalidos: {e}")
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"No se pudo leer o escribir un archivo: {e}")
        return EXIT_USAGE
    except ProtocolError as e:
        logger.error(f"Error del protocolo: {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
