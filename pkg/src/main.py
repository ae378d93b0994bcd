"""
API del simulador de recuperacion privada - Aplicacion principal de FastAPI
"""

import logging
import uuid
from contextlib import asynccontextmanager
from datetime import datetime
from typing import Any, Dict, List, Optional

import uvicorn
from fastapi import FastAPI, HTTPException, BackgroundTasks, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import ValidationError

from .config.logging_config import configure_logging
from .config.settings import settings
from .harness.bench import run_bench
from .harness.runner import audit_instance, run_demo, run_protocol
from .models.errors import DecodeFailure, ProtocolError
from .models.schemas import (
    AdversaryConfig, AuditReport, AuditRequest, BenchJobResponse, BenchRequest,
    ErrorResponse, HealthResponse, JobStatus, RunRequest, SystemParams, Transcript,
)
from .protocol.params import derive_params, closed_form_rates


# Configurar logging
configure_logging()
logger = logging.getLogger(__name__)


# Tracker global de trabajos de benchmark (en memoria)
job_tracker: Dict[str, Dict[str, Any]] = {}


@asynccontextmanager
async def lifespan(app: FastAPI):
    """
    Manejar el ciclo de vida de la aplicacion
    """
    logger.info("Iniciando API del simulador")
    yield
    logger.info("Apagando API del simulador")


# Crear aplicacion FastAPI
app = FastAPI(
    title=settings.api_title,
    version=settings.api_version,
    description="Simulacion de recuperacion privada simetrica multi-usuario con almacenamiento de Lagrange",
    lifespan=lifespan
)

# Agregar middleware CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],  # En produccion, especificar origenes permitidos
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


def _error(status_code: int, error: str, detail: str) -> JSONResponse:
    body = ErrorResponse(error=error, detail=detail)
    return JSONResponse(status_code=status_code, content=body.model_dump(mode="json"))


@app.exception_handler(DecodeFailure)
async def decode_failure_handler(request, exc: DecodeFailure):
    logger.error(f"Fallo de decodificacion en {request.url.path}: {exc}")
    return _error(409, "decode_failure", str(exc))


@app.exception_handler(ValidationError)
async def validation_error_handler(request, exc: ValidationError):
    logger.error(f"Datos invalidos en {request.url.path}: {exc}")
    return _error(422, "validation_error", str(exc))


@app.exception_handler(ProtocolError)
async def protocol_error_handler(request, exc: ProtocolError):
    status = 422 if isinstance(exc, ValueError) else 400
    logger.error(f"Error del protocolo en {request.url.path}: {exc}")
    return _error(status, type(exc).__name__, str(exc))


def run_bench_job(job_id: str, request: BenchRequest):
    """
    Ejecutar un barrido de parametros en segundo plano

    Args:
        job_id: Identificador del trabajo
        request: Grilla del barrido
    """
    try:
        logger.info(f"Iniciando benchmark {job_id}")
        job_tracker[job_id]["status"] = JobStatus.RUNNING
        frame = run_bench(
            n_values=request.N, m_values=request.M, k_values=request.K, x_values=request.X,
            t_values=request.T, b_values=request.B, u_values=request.U,
            files=request.files, seed=request.seed,
        )
        job_tracker[job_id]["rows"] = frame.to_dict(orient="records")
        job_tracker[job_id]["status"] = JobStatus.COMPLETED
        job_tracker[job_id]["message"] = f"Benchmark completado con {len(frame)} puntos"
        logger.info(f"Benchmark {job_id} completado")
    except Exception as e:
        logger.error(f"Benchmark {job_id} fallo: {e}")
        job_tracker[job_id]["status"] = JobStatus.FAILED
        job_tracker[job_id]["message"] = str(e)
    finally:
        job_tracker[job_id]["completed_at"] = datetime.now()


@app.get("/", response_model=Dict[str, str])
async def root():
    """
    Endpoint raiz
    """
    return {
        "message": settings.api_title,
        "version": settings.api_version,
        "docs": "/docs"
    }


@app.get("/health", response_model=HealthResponse)
async def health_check():
    """
    Endpoint de health check
    """
    return HealthResponse(status="healthy", version=settings.api_version, timestamp=datetime.now())


@app.post("/demo", response_model=Transcript)
def demo(seed: Optional[int] = Query(None, description="Semilla (por defecto la configurada)")):
    """
    Ejecutar el ejemplo trabajado con 1 servidor bizantino y 1 sin respuesta
    """
    return run_demo(seed=seed)


@app.post("/run", response_model=Transcript)
def run(request: RunRequest):
    """
    Ejecutar una instancia completa del protocolo
    """
    adversary = AdversaryConfig(
        byzantine=request.byzantine,
        unresponsive=request.unresponsive,
        strategy=request.strategy,
        constant=request.constant,
    )
    seed = settings.default_seed if request.seed is None else request.seed
    return run_protocol(request.params, theta=request.theta, adversary=adversary, seed=seed)


@app.post("/audit", response_model=List[AuditReport])
def audit(request: AuditRequest):
    """
    Auditar seguridad X, privacidad de usuario, privacidad de servidor y tasas
    """
    return audit_instance(request.params, request.checks, trials=request.trials, seed=request.seed)


@app.get("/rates")
async def rates(
    N: int = Query(..., ge=1),
    K: int = Query(..., ge=1),
    X: int = Query(0, ge=0),
    T: List[int] = Query(..., description="T_m de cada usuario"),
    B: int = Query(0, ge=0),
    U: int = Query(0, ge=0),
    server_privacy: bool = Query(True),
):
    """
    Formas cerradas de R y rho para los parametros dados
    """
    try:
        params = SystemParams(N=N, M=len(T), K=K, X=X, T=T, B=B, U=U, F=[1] * len(T), server_privacy=server_privacy)
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))
    derived = derive_params(params)
    rate, rho = closed_form_rates(params, derived)
    return {"P": derived.P, "q": derived.q, "R": str(rate), "rho": str(rho)}


@app.post("/bench", response_model=BenchJobResponse)
async def start_bench(request: BenchRequest, background_tasks: BackgroundTasks):
    """
    Lanzar un barrido de parametros en segundo plano
    """
    job_id = str(uuid.uuid4())
    started_at = datetime.now()
    job_tracker[job_id] = {
        "job_id": job_id,
        "status": JobStatus.PENDING,
        "started_at": started_at,
        "message": "Trabajo en cola para procesamiento"
    }
    background_tasks.add_task(run_bench_job, job_id, request)
    return BenchJobResponse(
        job_id=job_id,
        status=JobStatus.PENDING,
        message="Benchmark iniciado en segundo plano",
        started_at=started_at,
    )


@app.get("/bench/{job_id}", response_model=BenchJobResponse)
async def get_bench_status(job_id: str):
    """
    Obtener estado de un trabajo de benchmark
    """
    if job_id not in job_tracker:
        raise HTTPException(status_code=404, detail="Trabajo no encontrado")
    job = job_tracker[job_id]
    return BenchJobResponse(
        job_id=job_id,
        status=job["status"],
        message=job.get("message", "Procesando"),
        started_at=job["started_at"],
        completed_at=job.get("completed_at"),
        rows=job.get("rows"),
    )


if __name__ == "__main__":
    uvicorn.run(
        "src.main:app",
        host=settings.api_host,
        port=settings.api_port,
        reload=not settings.is_production,
        log_level=settings.log_level.lower()
    )
