"""
Servicio de auditoria: verificaciones algebraicas y estadisticas de
seguridad X, privacidad de usuario, privacidad de servidor y tasas
"""

import itertools
import json
import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
from scipy import stats as scipy_stats

from ..algebra.linalg import is_invertible
from ..algebra.polynomial import interpolate
from ..config.settings import settings
from ..models.errors import DuplicateNode, ModeOff
from ..models.schemas import AuditMode, AuditReport, SchemeContext, SystemParams, Transcript, Verdict
from ..protocol.client import UserClient, new_user_state
from ..protocol.params import closed_form_rates, validate_points
from ..protocol.randomness import RandomSource, Stream
from ..protocol.server import ServerNode, build_intermediate_polys, build_server_states
from ..protocol.storage import StorageDealer, generate_database, storage_basis, zero_randomness


logger = logging.getLogger(__name__)


def _uniformity_test(values: np.ndarray, q: int) -> Tuple[float, float]:
    counts = np.bincount(values, minlength=q)
    result = scipy_stats.chisquare(counts)
    return float(result.statistic), float(result.pvalue)


def _homogeneity_test(first: np.ndarray, second: np.ndarray, q: int) -> Tuple[float, float]:
    table = np.vstack([np.bincount(first, minlength=q), np.bincount(second, minlength=q)])
    table = table[:, table.sum(axis=0) > 0]
    if table.shape[1] < 2:
        # Ambos grupos constantes en el mismo valor
        return 0.0, 1.0
    result = scipy_stats.chi2_contingency(table)
    return float(result[0]), float(result[1])


class ChiSquareBattery:
    """Conjunto de pruebas chi-cuadrado con correccion de Bonferroni"""

    def __init__(self, alpha: float):
        self.alpha = alpha
        self.results: List[Dict] = []

    def add(self, label: Dict, statistic: float, p_value: float) -> None:
        self.results.append({"coordinate": label, "statistic": statistic, "p_value": p_value})

    @property
    def threshold(self) -> float:
        return self.alpha / max(len(self.results), 1)

    @property
    def worst(self) -> Dict:
        return min(self.results, key=lambda r: r["p_value"])

    @property
    def passed(self) -> bool:
        return self.worst["p_value"] > self.threshold

    def evidence(self, samples: int) -> Dict:
        worst = self.worst
        return {
            "tests": len(self.results),
            "samples_per_group": samples,
            "alpha": self.alpha,
            "bonferroni_threshold": self.threshold,
            "min_p_value": worst["p_value"],
            "statistic": worst["statistic"],
            "worst_coordinate": worst["coordinate"],
        }


def reference_rates(p: SystemParams) -> Dict[str, Dict[str, Fraction]]:
    """
    Tasas en forma cerrada de los esquemas que este protocolo generaliza,
    solo para los parametros que caen en su regimen
    """
    refs: Dict[str, Dict[str, Fraction]] = {}
    if p.M == 1 and not p.server_privacy:
        t1 = p.T[0]
        if p.X == 0:
            refs["U-B-MDS-TPIR"] = {"R": 1 - Fraction(p.K + t1 + 2 * p.B - 1, p.N - p.U)}
        refs["U-B-MDS-XTPIR"] = {"R": 1 - Fraction(p.K + p.X + t1 + 2 * p.B - 1, p.N - p.U)}
    if p.K == 1 and p.B == 0 and p.U == 0 and p.server_privacy:
        exposed = p.X + p.sum_t
        refs["MB-XTSPIR"] = {
            "R": 1 - Fraction(exposed, p.N),
            "rho": Fraction(exposed, p.N - exposed),
        }
    return refs


def audit_rates(transcript: Transcript) -> AuditReport:
    """
    Comparar R = L/D y rho medidos con las formas cerradas (aritmetica racional exacta)

    La tasa se compara con L / (S * (N - U')), U' los no responsivos observados;
    con U' = U coincide con la formula cerrada. Con menos borrados se
    descargan mas simbolos y la tasa medida queda por debajo de la formula,
    asi que se reportan ambas.
    """
    p, d = transcript.params, transcript.derived
    rate_formula, rho_formula = closed_form_rates(p, d)
    downloads = sum(1 for record in transcript.rounds for value in record.answers if value is not None)
    rate = Fraction(d.L, downloads)
    rho = Fraction(transcript.metrics.randomness_symbols, d.L)
    observed = len(transcript.adversary.unresponsive)
    rate_expected = Fraction(d.L, d.S * (p.N - observed))

    rate_ok = rate == rate_expected and (observed != p.U or rate == rate_formula)
    consistent = transcript.metrics.D == downloads and transcript.metrics.R == rate
    passed = rate_ok and rho == rho_formula and consistent

    evidence = {
        "measured_R": str(rate),
        "formula_R": str(rate_formula),
        "measured_rho": str(rho),
        "formula_rho": str(rho_formula),
        "expected_R_observed_erasures": str(rate_expected),
        "downloads": downloads,
        "unresponsive_observed": observed,
        "metrics_consistent": consistent,
        "references": {
            name: {key: str(value) for key, value in values.items()}
            for name, values in reference_rates(p).items()
        },
    }
    witness = None if passed else {"seed": transcript.seed, "theta": list(transcript.theta)}
    logger.info(f"Auditoria de tasas: R={rate} (formula {rate_formula}), rho={rho} (formula {rho_formula})")
    return AuditReport(
        name="rates", mode=AuditMode.ALGEBRAIC,
        verdict=Verdict.PASS if passed else Verdict.FAIL,
        evidence=evidence, seed=transcript.seed, witness=witness,
    )


class PrivacyAuditor:
    """
    Auditorias de una instancia publica (parametros + puntos)

    Las algebraicas barren todos los subconjuntos de servidores cuando
    N <= settings.exhaustive_subset_limit y muestrean en otro caso; las
    estadisticas reproducen sus muestras desde la semilla.
    """

    def __init__(self, ctx: SchemeContext, seed: Optional[int] = None, trials: Optional[int] = None):
        self.ctx = ctx
        self.seed = settings.default_seed if seed is None else seed
        self.trials = trials or settings.statistical_trials
        self.alpha = settings.chi_square_alpha

    def _subsets(self, size: int) -> Tuple[Iterable[Tuple[int, ...]], bool]:
        n = self.ctx.params.N
        if n <= settings.exhaustive_subset_limit:
            return itertools.combinations(range(n), size), True
        gen = RandomSource(self.seed).generator(Stream.AUDIT, size)
        sampled = [
            tuple(sorted(gen.choice(n, size=size, replace=False).tolist()))
            for _ in range(settings.sampled_subsets)
        ]
        return sampled, False

    def _warn_low_counts(self, trials: Optional[int] = None) -> None:
        trials = trials or self.trials
        if trials < 5 * self.ctx.derived.q:
            logger.warning(
                f"{trials} ensayos para q={self.ctx.derived.q}: conteos esperados menores a 5"
            )

    def _report(self, name: str, mode: AuditMode, passed: bool, evidence: Dict, witness: Optional[Dict] = None) -> AuditReport:
        verdict = Verdict.PASS if passed else Verdict.FAIL
        if passed:
            logger.info(f"Auditoria {name} ({mode.value}): pasa")
            witness = None
        else:
            logger.warning(f"Auditoria {name} ({mode.value}) fallo: {json.dumps(witness, default=str)}")
        return AuditReport(name=name, mode=mode, verdict=verdict, evidence=evidence, seed=self.seed, witness=witness)

    # ------------------------------------------------------------------
    # Puntos publicos
    # ------------------------------------------------------------------

    def audit_points(self) -> AuditReport:
        """P1-P4 y conteo de valores publicos contra la cota N + max{K, lambda}"""
        p, d, pts = self.ctx.params, self.ctx.derived, self.ctx.points
        violations = validate_points(pts, p, d)
        distinct = len(set(pts.alpha) | {v for row in pts.beta for v in row})
        evidence = {
            "violations": [v.model_dump() for v in violations],
            "distinct_values": distinct,
            "bound": p.N + max(p.K, d.lam),
        }
        witness = {"violations": evidence["violations"]}
        return self._report("points", AuditMode.ALGEBRAIC, not violations, evidence, witness)

    # ------------------------------------------------------------------
    # Seguridad X
    # ------------------------------------------------------------------

    def audit_x_security(self, mode: AuditMode = AuditMode.ALGEBRAIC) -> AuditReport:
        if self.ctx.params.X == 0:
            return self._report("xsec", mode, True, {"vacuous": True, "reason": "X = 0"})
        if mode == AuditMode.STATISTICAL:
            return self._x_security_statistical()
        return self._x_security_algebraic()

    def _x_security_algebraic(self) -> AuditReport:
        """Invertibilidad de [sigma_{i,K+x}(alpha_n)] para todo X-subconjunto y toda fila i"""
        ctx = self.ctx
        p, field = ctx.params, ctx.field
        noise_evals = []
        for i in range(ctx.derived.lam):
            try:
                basis = storage_basis(ctx, i)
            except DuplicateNode as e:
                return self._report("xsec", AuditMode.ALGEBRAIC, False, {"error": str(e)}, {"row": i + 1, "reason": str(e)})
            noise_evals.append([b.evaluate_many(ctx.points.alpha) for b in basis[p.K:]])

        subsets, exhaustive = self._subsets(p.X)
        checked = 0
        for subset in subsets:
            for i, evals in enumerate(noise_evals):
                matrix = [[evals[x][n] for x in range(p.X)] for n in subset]
                checked += 1
                if not is_invertible(field, matrix):
                    return self._report(
                        "xsec", AuditMode.ALGEBRAIC, False,
                        {"matrices_checked": checked, "exhaustive": exhaustive},
                        {"subset": [n + 1 for n in subset], "row": i + 1, "matrix": matrix},
                    )
        evidence = {"matrices_checked": checked, "exhaustive": exhaustive, "singular": 0}
        return self._report("xsec", AuditMode.ALGEBRAIC, True, evidence)

    def _x_security_statistical(self) -> AuditReport:
        """
        Fragmentos de los ultimos X servidores sobre muchas semillas, para dos
        bases distintas

        Los servidores 1..X guardan el ruido z tal cual (beta_{i,K+x} = alpha_x),
        asi que se miran servidores cuyos alpha no son nodos de interpolacion.
        Ademas de cada coordenada se prueba la X-tupla conjunta cuando hay
        muestras suficientes para q^X celdas.
        """
        ctx = self.ctx
        p, q = ctx.params, ctx.derived.q
        self._warn_low_counts()
        subset = list(range(p.N - p.X, p.N))
        base = RandomSource(self.seed)
        databases = [generate_database(ctx, base.child(1)), generate_database(ctx, base.child(2))]
        dealer = StorageDealer(ctx, base)
        cells = [(index, i) for index in ctx.file_indices for i in range(ctx.derived.lam)]
        samples = np.zeros((2, self.trials, len(cells), p.X), dtype=np.int64)
        for t in range(self.trials):
            trial_rng = base.child(10, t)
            for g, database in enumerate(databases):
                shares = dealer.encode_database(database, rng=trial_rng).shares
                samples[g, t] = [[shares[n].values[index][i] for n in subset] for index, i in cells]

        battery = ChiSquareBattery(self.alpha)
        for c, (index, i) in enumerate(cells):
            for x, n in enumerate(subset):
                label = {"server": n + 1, "file": list(index), "row": i + 1}
                for g in range(2):
                    battery.add({**label, "database": g + 1, "test": "uniformity"}, *_uniformity_test(samples[g, :, c, x], q))
                battery.add({**label, "test": "homogeneity"}, *_homogeneity_test(samples[0, :, c, x], samples[1, :, c, x], q))

        joint_cells = q ** p.X
        joint = self.trials >= 5 * joint_cells
        if joint:
            weights = q ** np.arange(p.X, dtype=np.int64)
            for c, (index, i) in enumerate(cells):
                label = {"servers": [n + 1 for n in subset], "file": list(index), "row": i + 1}
                tuples = [samples[g, :, c, :] @ weights for g in range(2)]
                for g in range(2):
                    battery.add({**label, "database": g + 1, "test": "joint_uniformity"}, *_uniformity_test(tuples[g], joint_cells))
                battery.add({**label, "test": "joint_homogeneity"}, *_homogeneity_test(tuples[0], tuples[1], joint_cells))
        evidence = battery.evidence(self.trials)
        evidence["subset"] = [n + 1 for n in subset]
        evidence["joint"] = joint
        witness = {"seed": self.seed, "subset": [n + 1 for n in subset], "coordinate": battery.worst["coordinate"]}
        return self._report("xsec", AuditMode.STATISTICAL, battery.passed, evidence, witness)

    # ------------------------------------------------------------------
    # Privacidad de usuario
    # ------------------------------------------------------------------

    def audit_user_privacy(self, m: int, mode: AuditMode = AuditMode.ALGEBRAIC) -> AuditReport:
        p = self.ctx.params
        if not 1 <= m <= p.M:
            raise ValueError(f"Usuario {m} fuera de [1, {p.M}]")
        name = f"userpriv[{m}]"
        if p.F[m - 1] == 1:
            return self._report(name, mode, True, {"vacuous": True, "reason": "F_m = 1"})
        if mode == AuditMode.STATISTICAL:
            return self._user_privacy_statistical(m, name)
        return self._user_privacy_algebraic(m, name)

    def _user_privacy_algebraic(self, m: int, name: str) -> AuditReport:
        """
        Invertibilidad de G_j^s con filas h_l(alpha_n), n en el subconjunto,
        donde h_l vale 0 en beta_{j,s}, 1 en alpha_l y 0 en los demas alpha_v, v en [T_m]
        """
        ctx = self.ctx
        field, t_m = ctx.field, ctx.params.T[m - 1]
        anchors = ctx.points.alpha[:t_m]
        tables = {}
        for s in range(1, ctx.derived.S + 1):
            for j, row in enumerate(ctx.points.beta):
                basis = [
                    interpolate(field, [(row[s - 1], 0)] + [(a, 1 if v == ell else 0) for v, a in enumerate(anchors)])
                    for ell in range(t_m)
                ]
                tables[(s, j)] = [h.evaluate_many(ctx.points.alpha) for h in basis]

        subsets, exhaustive = self._subsets(t_m)
        checked = 0
        for subset in subsets:
            for (s, j), evals in tables.items():
                matrix = [[evals[ell][n] for ell in range(t_m)] for n in subset]
                checked += 1
                if not is_invertible(field, matrix):
                    return self._report(
                        name, AuditMode.ALGEBRAIC, False,
                        {"matrices_checked": checked, "exhaustive": exhaustive},
                        {"subset": [n + 1 for n in subset], "round": s, "j": j + 1, "matrix": matrix},
                    )
        evidence = {"matrices_checked": checked, "exhaustive": exhaustive, "singular": 0}
        return self._report(name, AuditMode.ALGEBRAIC, True, evidence)

    def _user_privacy_statistical(self, m: int, name: str) -> AuditReport:
        """Consultas vistas por los ultimos T_m servidores bajo theta_m = 1 y theta_m = 2"""
        ctx = self.ctx
        q, t_m, f_m = ctx.derived.q, ctx.params.T[m - 1], ctx.params.F[m - 1]
        self._warn_low_counts()
        subset = list(range(ctx.params.N - t_m, ctx.params.N))
        alphas = [ctx.points.alpha[n] for n in subset]
        base = RandomSource(self.seed)
        coordinates = [
            (s, f, j, n)
            for s in range(1, ctx.derived.S + 1)
            for f in range(1, f_m + 1)
            for j in range(ctx.derived.lam)
            for n in range(t_m)
        ]
        samples = np.zeros((2, self.trials, len(coordinates)), dtype=np.int64)
        for g, theta in enumerate((1, 2)):
            for t in range(self.trials):
                client = UserClient(ctx, new_user_state(ctx, m, theta, base.child(20, theta, t)))
                row = []
                for s in range(1, ctx.derived.S + 1):
                    polys = client.build_query_polynomials(s)
                    for f in range(1, f_m + 1):
                        for j in range(ctx.derived.lam):
                            row.extend(polys[(f, j)].evaluate_many(alphas))
                samples[g, t] = row

        battery = ChiSquareBattery(self.alpha)
        for c, (s, f, j, n) in enumerate(coordinates):
            label = {"round": s, "file": f, "j": j + 1, "server": subset[n] + 1}
            battery.add({**label, "test": "homogeneity"}, *_homogeneity_test(samples[0, :, c], samples[1, :, c], q))
            for g in range(2):
                battery.add({**label, "theta": g + 1, "test": "uniformity"}, *_uniformity_test(samples[g, :, c], q))
        evidence = battery.evidence(self.trials)
        witness = {"seed": self.seed, "subset": [n + 1 for n in subset], "coordinate": battery.worst["coordinate"]}
        return self._report(name, AuditMode.STATISTICAL, battery.passed, evidence, witness)

    # ------------------------------------------------------------------
    # Privacidad de servidor (y ciega)
    # ------------------------------------------------------------------

    def audit_server_privacy(self, trials: Optional[int] = None, power_check: bool = False) -> AuditReport:
        """
        Vista residual A^s(alpha_i), i en [K+X+sum(T)-1], condicionada a toda la
        aleatoriedad salvo la del dealer

        Grupo A conserva los archivos no deseados; grupo B los vuelve a sortear
        en cada ensayo. Ambos deben verse uniformes e indistinguibles.

        Args:
            trials: Ensayos por grupo (por defecto los del auditor)
            power_check: Permite correr sin privacidad de servidor para
                comprobar que la prueba detecta la fuga

        Raises:
            ModeOff: si la privacidad de servidor esta desactivada y no es power_check
        """
        ctx = self.ctx
        p, d = ctx.params, ctx.derived
        if not p.server_privacy and not power_check:
            raise ModeOff("La auditoria de privacidad de servidor requiere el modo simetrico")
        trials = trials or self.trials
        self._warn_low_counts(trials)
        base = RandomSource(self.seed)
        theta = (1,) * p.M
        viewers = ctx.noise_count

        fixed_db = generate_database(ctx, base.child(32))
        dealer = StorageDealer(ctx, base.child(30))
        users = [UserClient(ctx, new_user_state(ctx, m, theta[m - 1], base.child(31))) for m in range(1, p.M + 1)]
        rounds = range(1, d.S + 1)
        queries = {s: [qr for user in users for qr in user.emit_queries(s) if qr.server_id <= viewers] for s in rounds}
        intermediate = {s: build_intermediate_polys(ctx, s) for s in rounds}

        psi_vanishes = None
        if p.server_privacy:
            audit_dealer = StorageDealer(ctx, base.child(30), audit_mode=True)
            psi_vanishes = all(
                audit_dealer.generate_round_randomness(s).polynomial(row[s - 1]) == 0
                for s in rounds for row in ctx.points.beta
            )

        def residual_view(database, dealer_rng: RandomSource) -> List[int]:
            shares = dealer.encode_database(database).shares[:viewers]
            randomness = {
                s: dealer.generate_round_randomness(s, rng=dealer_rng).shares if p.server_privacy else zero_randomness(ctx, s)
                for s in rounds
            }
            nodes = [ServerNode(ctx, state) for state in build_server_states(shares, randomness)]
            return [node.compute_answer(queries[s], intermediate[s], s).value for s in rounds for node in nodes]

        samples = np.zeros((2, trials, d.S * viewers), dtype=np.int64)
        for t in range(trials):
            samples[0, t] = residual_view(fixed_db, base.child(33, t))
            files = dict(generate_database(ctx, base.child(34, t)).files)
            files[theta] = fixed_db.file(theta)
            varied_db = fixed_db.model_copy(update={"files": files})
            samples[1, t] = residual_view(varied_db, base.child(35, t))

        battery = ChiSquareBattery(self.alpha)
        for c in range(d.S * viewers):
            label = {"round": c // viewers + 1, "server": c % viewers + 1}
            for g, group in enumerate(("fixed", "varied")):
                battery.add({**label, "group": group, "test": "uniformity"}, *_uniformity_test(samples[g, :, c], d.q))
            battery.add({**label, "test": "homogeneity"}, *_homogeneity_test(samples[0, :, c], samples[1, :, c], d.q))

        evidence = battery.evidence(trials)
        evidence["server_privacy"] = p.server_privacy
        evidence["psi_vanishes_on_beta"] = psi_vanishes
        witness = {"seed": self.seed, "subset": list(range(1, viewers + 1)), "coordinate": battery.worst["coordinate"]}
        return self._report("srvpriv", AuditMode.STATISTICAL, battery.passed, evidence, witness)
