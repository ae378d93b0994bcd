"""
Orquestacion de ejecuciones completas del protocolo:
dealer -> usuarios -> servidores -> adversario -> decodificadores
"""

import hashlib
import json
import logging
import time
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from ..config.settings import settings
from ..models.errors import AdversaryBoundExceeded, DecodeFailure, RetrievalMismatch
from ..models.schemas import (
    AdversaryConfig, AuditCheck, AuditMode, AuditReport, Database, DecodedRound, RoundQuery,
    RoundRecord, RunMetrics, SchemeContext, SystemParams, Transcript,
)
from ..protocol.client import UserClient, new_user_state
from ..protocol.params import build_context, points_digest
from ..protocol.randomness import RandomSource, Stream
from ..protocol.retrieval import assemble_file, decode_round
from ..protocol.server import ServerNode, apply_adversary, build_intermediate_polys, build_server_states
from ..protocol.storage import StorageDealer, generate_database, zero_randomness
from ..services.audit import PrivacyAuditor, audit_rates


logger = logging.getLogger(__name__)


# Instancia del ejemplo trabajado: q=17, lambda=3, S=2, R=1/4, rho=7/3
DEMO_PARAMS = SystemParams(N=13, M=2, K=2, X=2, T=(2, 2), B=1, U=1, F=(2, 2))
DEMO_THETA = (1, 2)
DEMO_ADVERSARY = AdversaryConfig(byzantine=(3,), unresponsive=(7,))


def _queries_digest(queries: Sequence[RoundQuery]) -> str:
    payload = [[qr.user_id, qr.server_id, qr.values] for qr in sorted(queries, key=lambda qr: (qr.user_id, qr.server_id))]
    return hashlib.sha256(json.dumps(payload, separators=(",", ":")).encode()).hexdigest()


class ProtocolRunner:
    """
    Ejecutor de una instancia: reparte, corre las S rondas y verifica el
    archivo recuperado contra el texto plano
    """

    def __init__(self, ctx: SchemeContext, audit_mode: bool = False, decode_per_user: bool = False):
        self.ctx = ctx
        self.audit_mode = audit_mode
        self.decode_per_user = decode_per_user

    def _check_adversary(self, adversary: AdversaryConfig, enforce_bounds: bool) -> None:
        p = self.ctx.params
        out_of_range = [n for n in adversary.byzantine + adversary.unresponsive if n > p.N]
        if out_of_range:
            raise ValueError(f"Servidores fuera de [1, {p.N}]: {out_of_range}")
        if len(adversary.byzantine) > p.B or len(adversary.unresponsive) > p.U:
            message = (
                f"Adversario |B|={len(adversary.byzantine)}, |U|={len(adversary.unresponsive)} "
                f"excede las cotas B={p.B}, U={p.U}"
            )
            if enforce_bounds:
                raise AdversaryBoundExceeded(message)
            logger.warning(f"{message}; se continua sin proteccion")

    def _check_theta(self, theta: Tuple[int, ...]) -> None:
        p = self.ctx.params
        if len(theta) != p.M or any(not 1 <= t <= f for t, f in zip(theta, p.F)):
            raise ValueError(f"theta={list(theta)} no es compatible con F={list(p.F)}")

    def run(
        self,
        database: Database,
        theta: Tuple[int, ...],
        adversary: AdversaryConfig,
        rng: RandomSource,
        enforce_bounds: bool = True,
    ) -> Transcript:
        """
        Ejecutar las S rondas (consulta -> respuesta -> adversario -> decodificacion)

        Raises:
            DecodeFailure: si el adversario excede lo corregible
            RetrievalMismatch: si el oraculo detecta un archivo incorrecto
        """
        ctx = self.ctx
        p, d = ctx.params, ctx.derived
        theta = tuple(theta)
        self._check_theta(theta)
        self._check_adversary(adversary, enforce_bounds)
        started = time.perf_counter()

        # Reparto
        dealer = StorageDealer(ctx, rng, audit_mode=self.audit_mode)
        encoded = dealer.encode_database(database)
        randomness = {
            s: dealer.generate_round_randomness(s).shares if p.server_privacy else zero_randomness(ctx, s)
            for s in range(1, d.S + 1)
        }
        servers = [ServerNode(ctx, state) for state in build_server_states(encoded.shares, randomness)]
        users = [
            UserClient(ctx, new_user_state(ctx, m, theta[m - 1], rng))
            for m in range(1, p.M + 1)
        ]
        # Desde aqui ninguna parte deberia leer el texto plano
        reads_before = database.sealed_reads
        if self.audit_mode:
            database.seal()
        try:
            records, decoded, downloads = self._answer_phase(servers, users, adversary, rng)
        finally:
            database.unseal()
        reads_in_answer_phase = database.sealed_reads - reads_before

        retrieved = assemble_file(decoded, theta, ctx)
        if retrieved.matrix != database.file(theta):
            logger.error(f"El archivo recuperado para theta={list(theta)} no coincide con el texto plano")
            raise RetrievalMismatch(f"Archivo incorrecto para theta={list(theta)}")

        randomness_symbols = d.S * ctx.noise_count if p.server_privacy else 0
        metrics = RunMetrics(
            L=d.L,
            D=downloads,
            R=Fraction(d.L, downloads),
            randomness_symbols=randomness_symbols,
            rho=Fraction(randomness_symbols, d.L),
            wall_time=time.perf_counter() - started,
        )
        logger.info(f"Archivo theta={list(theta)} recuperado: R={metrics.R}, rho={metrics.rho}")
        return Transcript(
            params=p,
            derived=d,
            points_digest=points_digest(ctx.points),
            seed=rng.seed,
            theta=theta,
            adversary=adversary,
            rounds=records,
            retrieved=retrieved,
            metrics=metrics,
            plaintext_reads_in_answer_phase=reads_in_answer_phase if self.audit_mode else None,
        )

    def _answer_phase(
        self,
        servers: List[ServerNode],
        users: List[UserClient],
        adversary: AdversaryConfig,
        rng: RandomSource,
    ) -> Tuple[List[RoundRecord], List[DecodedRound], int]:
        ctx = self.ctx
        p, d = ctx.params, ctx.derived
        records: List[RoundRecord] = []
        decoded: List[DecodedRound] = []
        downloads = 0
        for s in range(1, d.S + 1):
            queries = [query for user in users for query in user.emit_queries(s)]
            intermediate = build_intermediate_polys(ctx, s)
            answers = []
            for server in servers:
                honest = server.compute_answer(queries, intermediate, s)
                adversary_rng = rng.generator(Stream.ADVERSARY, s, server.state.server_id)
                answers.append(apply_adversary(honest, adversary, ctx.field, adversary_rng))
            received = [answer.value for answer in answers]
            downloads += sum(1 for value in received if value is not None)

            try:
                round_result = decode_round(answers, ctx, s)
                if self.decode_per_user:
                    for m in range(2, p.M + 1):
                        if decode_round(answers, ctx, s) != round_result:
                            raise DecodeFailure(f"El usuario {m} decodifico otro polinomio en la ronda {s}")
            except DecodeFailure as e:
                logger.error(f"Fallo de decodificacion en la ronda {s}: {e}")
                raise
            decoded.append(round_result)
            records.append(RoundRecord(
                round=s,
                queries_digest=_queries_digest(queries),
                answers=received,
                erasures=[value is None for value in received],
                answer_coeffs=round_result.answer_coeffs,
                column=round_result.column,
            ))
            logger.info(f"Ronda {s}/{d.S} decodificada con {sum(v is not None for v in received)} respuestas")
        return records, decoded, downloads


def run_protocol(
    params: SystemParams,
    database: Union[Database, int, None] = None,
    theta: Optional[Sequence[int]] = None,
    adversary: Optional[AdversaryConfig] = None,
    seed: Optional[int] = None,
    audit_mode: bool = False,
    enforce_bounds: bool = True,
    decode_per_user: bool = False,
) -> Transcript:
    """
    Ejecutar una instancia completa

    Args:
        params: Parametros del sistema
        database: Base en claro, o una semilla para generarla (None = usar `seed`)
        theta: Indices deseados (por defecto todos 1)
        adversary: Configuracion del adversario (por defecto ninguno)
        seed: Semilla del protocolo (None = entropia del sistema, registrada)
        audit_mode: Conserva polinomios en claro y cuenta lecturas del texto plano
        enforce_bounds: Rechaza adversarios que excedan (B, U)
        decode_per_user: Cada usuario decodifica por separado

    Returns:
        Transcript
    """
    ctx = build_context(params)
    rng = RandomSource(seed)
    if not isinstance(database, Database):
        database = generate_database(ctx, rng if database is None else RandomSource(database))
    theta = tuple(theta) if theta is not None else (1,) * params.M
    runner = ProtocolRunner(ctx, audit_mode=audit_mode, decode_per_user=decode_per_user)
    return runner.run(database, theta, adversary or AdversaryConfig(), rng, enforce_bounds=enforce_bounds)


def run_demo(seed: Optional[int] = None) -> Transcript:
    """Ejemplo trabajado: N=13, M=2, K=2, X=2, T=(2,2), B=1, U=1, F=(2,2)"""
    seed = settings.default_seed if seed is None else seed
    logger.info(f"Ejecutando la demo con semilla {seed}")
    return run_protocol(DEMO_PARAMS, theta=DEMO_THETA, adversary=DEMO_ADVERSARY, seed=seed, audit_mode=True)


def max_adversary(params: SystemParams) -> AdversaryConfig:
    """Adversario en las cotas: los primeros B servidores bizantinos y los ultimos U mudos"""
    return AdversaryConfig(
        byzantine=tuple(range(1, params.B + 1)),
        unresponsive=tuple(range(params.N - params.U + 1, params.N + 1)),
    )


def audit_instance(
    params: SystemParams,
    checks: Sequence[AuditCheck] = (AuditCheck.ALL,),
    trials: Optional[int] = None,
    seed: Optional[int] = None,
) -> List[AuditReport]:
    """
    Correr las auditorias pedidas sobre una instancia

    Sin privacidad de servidor, la auditoria srvpriv corre como prueba de
    potencia y se espera que falle.
    """
    ctx = build_context(params)
    auditor = PrivacyAuditor(ctx, seed=seed, trials=trials)
    selected = set(checks)
    if AuditCheck.ALL in selected:
        selected = set(AuditCheck) - {AuditCheck.ALL}

    reports: List[AuditReport] = []
    if AuditCheck.POINTS in selected:
        reports.append(auditor.audit_points())
    if AuditCheck.XSEC in selected:
        reports.append(auditor.audit_x_security(AuditMode.ALGEBRAIC))
        reports.append(auditor.audit_x_security(AuditMode.STATISTICAL))
    if AuditCheck.USERPRIV in selected:
        for m in range(1, params.M + 1):
            reports.append(auditor.audit_user_privacy(m, AuditMode.ALGEBRAIC))
            reports.append(auditor.audit_user_privacy(m, AuditMode.STATISTICAL))
    if AuditCheck.SRVPRIV in selected:
        reports.append(auditor.audit_server_privacy(power_check=not params.server_privacy))
    if AuditCheck.RATES in selected:
        transcript = run_protocol(params, adversary=max_adversary(params), seed=auditor.seed)
        reports.append(audit_rates(transcript))
    return reports
