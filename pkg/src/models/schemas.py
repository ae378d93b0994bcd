"""
Modelos Pydantic del simulador: parametros, datos del protocolo,
transcripciones, reportes de auditoria y requests/responses de la API
"""

import itertools
import math
from datetime import datetime
from enum import Enum
from fractions import Fraction
from typing import Annotated, Any, Dict, List, Optional, Tuple

from pydantic import (
    BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator,
    PrivateAttr, WithJsonSchema, field_validator, model_validator,
)


from ..algebra.field import PrimeField


def _to_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise ValueError(f"No es un racional: {value!r}")


def _fraction_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


# Racional exacto serializado como "num/den"
Rational = Annotated[
    Fraction,
    PlainValidator(_to_fraction),
    PlainSerializer(_fraction_text, return_type=str),
    WithJsonSchema({"type": "string", "examples": ["1/4"]}),
]


class ByzantineStrategy(str, Enum):
    """Estrategias de corrupcion de un servidor bizantino"""
    UNIFORM_RANDOM = "random"
    ADDITIVE_OFFSET = "offset"
    CONSTANT = "const"


class AuditMode(str, Enum):
    """Nivel de verificacion de una auditoria"""
    ALGEBRAIC = "algebraic"
    STATISTICAL = "statistical"


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"


class AuditCheck(str, Enum):
    """Chequeos disponibles en el subcomando audit"""
    POINTS = "points"
    XSEC = "xsec"
    USERPRIV = "userpriv"
    SRVPRIV = "srvpriv"
    RATES = "rates"
    ALL = "all"


class JobStatus(str, Enum):
    """Enumeracion de estados de trabajos de benchmark"""
    PENDING = "PENDING"
    RUNNING = "RUNNING"
    COMPLETED = "COMPLETED"
    FAILED = "FAILED"


# ---------------------------------------------------------------------------
# Parametros
# ---------------------------------------------------------------------------

class SystemParams(BaseModel):
    """Parametros publicos del sistema (N, M, K, X, T, B, U, F)"""
    model_config = ConfigDict(frozen=True)

    N: int = Field(..., ge=1)  # Numero de servidores
    M: int = Field(..., ge=1)  # Numero de usuarios
    K: int = Field(..., ge=1)  # Dimension MDS (columnas por archivo)
    X: int = Field(0, ge=0)  # Umbral de seguridad del almacenamiento
    T: Tuple[int, ...]  # Umbral de colusion de cada usuario
    B: int = Field(0, ge=0)  # Cota de servidores bizantinos
    U: int = Field(0, ge=0)  # Cota de servidores que no responden
    F: Tuple[int, ...]  # Rango de indices de cada usuario
    server_privacy: bool = True  # Activa el polinomio de ruido del dealer
    q: Optional[int] = Field(None, ge=2)  # Modulo forzado (None = minimo admisible)

    @field_validator("T")
    def validate_thresholds(cls, v):
        if any(t < 1 for t in v):
            raise ValueError(f"Todo T_m debe ser >= 1: {list(v)}")
        return v

    @field_validator("F")
    def validate_ranges(cls, v):
        if any(f < 1 for f in v):
            raise ValueError(f"Todo F_m debe ser >= 1: {list(v)}")
        return v

    @model_validator(mode="after")
    def validate_lengths(self):
        if len(self.T) != self.M or len(self.F) != self.M:
            raise ValueError(
                f"T y F deben tener M={self.M} entradas (T={list(self.T)}, F={list(self.F)})"
            )
        return self

    @property
    def sum_t(self) -> int:
        return sum(self.T)

    @property
    def feasibility_bound(self) -> int:
        """K + X + sum(T) + 2B + U - 1; N debe superarlo estrictamente"""
        return self.K + self.X + self.sum_t + 2 * self.B + self.U - 1


class DerivedParams(BaseModel):
    """Parametros derivados (P, lambda, S, L, q)"""
    model_config = ConfigDict(frozen=True)

    P: int  # Simbolos decodificables por ronda
    lam: int  # Filas por archivo
    S: int  # Numero de rondas
    L: int  # Simbolos por archivo
    q: int  # Modulo del campo


class PublicPoints(BaseModel):
    """Puntos de evaluacion publicos beta (lambda x (K+X)) y alpha (N)"""
    model_config = ConfigDict(frozen=True)

    beta: List[List[int]]
    alpha: List[int]


class PointViolation(BaseModel):
    condition: str  # P1, P2, P3 o P4
    indices: List[int]  # Indices 1-based implicados
    detail: str


class SchemeContext(BaseModel):
    """Todo lo publico de una instancia: parametros, derivados y puntos"""
    model_config = ConfigDict(frozen=True)

    params: SystemParams
    derived: DerivedParams
    points: PublicPoints

    _field: PrimeField = PrivateAttr()

    def model_post_init(self, __context: Any) -> None:
        self._field = PrimeField(q=self.derived.q)

    @property
    def field(self) -> PrimeField:
        return self._field

    @property
    def answer_dimension(self) -> int:
        """Dimension del codigo de respuestas: lambda + K + X + sum(T) - 1"""
        p = self.params
        return self.derived.lam + p.K + p.X + p.sum_t - 1

    @property
    def noise_count(self) -> int:
        """Simbolos de ruido del dealer por ronda: K + X + sum(T) - 1"""
        p = self.params
        return p.K + p.X + p.sum_t - 1

    @property
    def file_indices(self) -> List[Tuple[int, ...]]:
        return list(itertools.product(*(range(1, f + 1) for f in self.params.F)))

    @property
    def file_count(self) -> int:
        return math.prod(self.params.F)


# ---------------------------------------------------------------------------
# Datos del protocolo
# ---------------------------------------------------------------------------

class Database(BaseModel):
    """Archivos en texto plano: matriz lambda x K por cada M-tupla de indices"""
    q: int = Field(..., ge=2)
    M: int = Field(..., ge=1)
    F: Tuple[int, ...]
    lam: int = Field(..., ge=1)
    K: int = Field(..., ge=1)
    files: Dict[Tuple[int, ...], List[List[int]]]
    _sealed: bool = PrivateAttr(default=False)
    _sealed_reads: int = PrivateAttr(default=0)

    @model_validator(mode="after")
    def validate_files(self):
        if len(self.F) != self.M:
            raise ValueError(f"F debe tener M={self.M} entradas")
        expected = set(itertools.product(*(range(1, f + 1) for f in self.F)))
        if set(self.files) != expected:
            raise ValueError(
                f"Se esperaban {len(expected)} archivos indexados por F={list(self.F)}, "
                f"llegaron {len(self.files)}"
            )
        for index, matrix in self.files.items():
            if len(matrix) != self.lam or any(len(row) != self.K for row in matrix):
                raise ValueError(f"El archivo {index} no es {self.lam}x{self.K}")
            if any(not 0 <= v < self.q for row in matrix for v in row):
                raise ValueError(f"El archivo {index} tiene simbolos fuera de [0, {self.q})")
        return self

    def file(self, index: Tuple[int, ...]) -> List[List[int]]:
        if self._sealed:
            self._sealed_reads += 1
        return self.files[tuple(index)]

    def seal(self) -> None:
        """Contar desde ahora cada lectura de un archivo en claro"""
        self._sealed = True

    def unseal(self) -> None:
        self._sealed = False

    @property
    def sealed_reads(self) -> int:
        return self._sealed_reads


class StorageShare(BaseModel):
    """Fragmento Y_n: phi_i^{(f)}(alpha_n) para cada archivo f y fila i"""
    server_id: int = Field(..., ge=1)
    values: Dict[Tuple[int, ...], List[int]]  # Archivo -> lambda evaluaciones


class RoundRandomnessShare(BaseModel):
    """Aleatoriedad correlacionada psi^s(alpha_n) de un servidor"""
    server_id: int = Field(..., ge=1)
    round: int = Field(..., ge=1)
    value: int = Field(..., ge=0)


class UserState(BaseModel):
    """Estado privado de un usuario: indice deseado y ruidos de sus consultas"""
    user_id: int = Field(..., ge=1)
    theta: int = Field(..., ge=1)
    noises: Dict[int, List[List[List[int]]]]  # Ronda -> [f_m][j][t]


class RoundQuery(BaseModel):
    """Evaluaciones Q_j^{(f_m),m,s}(alpha_n) que un usuario envia a un servidor"""
    user_id: int = Field(..., ge=1)
    server_id: int = Field(..., ge=1)
    round: int = Field(..., ge=1)
    values: List[List[int]]  # [f_m - 1][j]


class ServerState(BaseModel):
    """Vista local de un servidor: su fragmento y su aleatoriedad por ronda"""
    server_id: int = Field(..., ge=1)
    storage: StorageShare
    randomness: Dict[int, int] = Field(default_factory=dict)  # Ronda -> psi^s(alpha_n)

    @model_validator(mode="after")
    def validate_owner(self):
        if self.storage.server_id != self.server_id:
            raise ValueError(
                f"El fragmento del servidor {self.storage.server_id} no pertenece al servidor {self.server_id}"
            )
        return self


class AdversaryConfig(BaseModel):
    """Servidores bizantinos y no responsivos, fijos durante toda la ejecucion"""
    model_config = ConfigDict(frozen=True)

    byzantine: Tuple[int, ...] = ()
    unresponsive: Tuple[int, ...] = ()
    strategy: ByzantineStrategy = ByzantineStrategy.UNIFORM_RANDOM
    constant: int = 1  # c de offset:c y const:c

    @field_validator("byzantine", "unresponsive")
    def validate_ids(cls, v):
        if any(n < 1 for n in v):
            raise ValueError(f"Los servidores se numeran desde 1: {list(v)}")
        if len(set(v)) != len(v):
            raise ValueError(f"Servidores repetidos: {list(v)}")
        return tuple(sorted(v))

    @model_validator(mode="after")
    def validate_disjoint(self):
        overlap = set(self.byzantine) & set(self.unresponsive)
        if overlap:
            raise ValueError(f"Un servidor no puede ser bizantino y no responsivo: {sorted(overlap)}")
        return self


class RoundAnswer(BaseModel):
    server_id: int = Field(..., ge=1)
    round: int = Field(..., ge=1)
    value: Optional[int] = None  # None = no respondio


class DecodedRound(BaseModel):
    """Polinomio de respuesta recuperado y columna extraida en una ronda"""
    round: int = Field(..., ge=1)
    answer_coeffs: List[int]  # Coeficientes de A^s, de menor a mayor grado
    column: List[int]


class RetrievedFile(BaseModel):
    theta: Tuple[int, ...]
    matrix: List[List[int]]  # lambda x K


# ---------------------------------------------------------------------------
# Transcripcion y metricas
# ---------------------------------------------------------------------------

class RoundRecord(BaseModel):
    round: int
    queries_digest: str  # sha256 de las consultas de la ronda
    answers: List[Optional[int]]  # Respuesta recibida de cada servidor
    erasures: List[bool]
    answer_coeffs: List[int]
    column: List[int]


class RunMetrics(BaseModel):
    L: int  # Simbolos del archivo deseado
    D: int  # Simbolos descargados (respuestas recibidas)
    R: Rational  # Tasa de recuperacion L/D
    randomness_symbols: int  # Simbolos de aleatoriedad del dealer
    rho: Rational  # Tasa de secreto
    wall_time: Optional[float] = None  # Segundos


class Transcript(BaseModel):
    """Registro completo de una ejecucion"""
    params: SystemParams
    derived: DerivedParams
    points_digest: str
    seed: int
    theta: Tuple[int, ...]
    adversary: AdversaryConfig
    rounds: List[RoundRecord]
    retrieved: RetrievedFile
    metrics: RunMetrics
    plaintext_reads_in_answer_phase: Optional[int] = None  # Solo en modo auditoria


class AuditReport(BaseModel):
    """Resultado de una auditoria con su evidencia"""
    name: str
    mode: AuditMode
    verdict: Verdict
    evidence: Dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = None
    witness: Optional[Dict[str, Any]] = None

    @model_validator(mode="after")
    def validate_witness(self):
        if self.verdict == Verdict.FAIL and not self.witness:
            raise ValueError(f"La auditoria {self.name} fallo sin testigo reproducible")
        return self

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS


# ---------------------------------------------------------------------------
# API
# ---------------------------------------------------------------------------

class RunRequest(BaseModel):
    """Request para ejecutar el protocolo"""
    params: SystemParams
    theta: Optional[Tuple[int, ...]] = None  # Por defecto (1, ..., 1)
    byzantine: Tuple[int, ...] = ()
    unresponsive: Tuple[int, ...] = ()
    strategy: ByzantineStrategy = ByzantineStrategy.UNIFORM_RANDOM
    constant: int = 1
    seed: Optional[int] = None


class AuditRequest(BaseModel):
    """Request para auditar una instancia"""
    params: SystemParams
    checks: List[AuditCheck] = Field(default_factory=lambda: [AuditCheck.ALL])
    trials: Optional[int] = Field(None, ge=10)
    seed: Optional[int] = None


class BenchRequest(BaseModel):
    """Grilla de barrido de parametros"""
    N: List[int] = Field(default_factory=lambda: [10, 13, 16])
    M: List[int] = Field(default_factory=lambda: [1, 2])
    K: List[int] = Field(default_factory=lambda: [1, 2])
    X: List[int] = Field(default_factory=lambda: [0, 2])
    T: List[int] = Field(default_factory=lambda: [1, 2])
    B: List[int] = Field(default_factory=lambda: [0, 1])
    U: List[int] = Field(default_factory=lambda: [0, 1])
    files: int = Field(2, ge=1)  # F_m de cada usuario
    seed: Optional[int] = None


class BenchJobResponse(BaseModel):
    job_id: str
    status: JobStatus
    message: str
    started_at: datetime
    completed_at: Optional[datetime] = None
    rows: Optional[List[Dict[str, Any]]] = None


class HealthResponse(BaseModel):
    status: str
    version: str
    timestamp: datetime


class ErrorResponse(BaseModel):
    error: str
    detail: Optional[str] = None
    timestamp: datetime = Field(default_factory=datetime.now)
