"""
Serializacion JSON canonica de bases de datos, transcripciones y reportes
"""

import json
from typing import Any, Dict, List, Type, TypeVar

from pydantic import BaseModel, ValidationError

from ..models.errors import ParseError
from ..models.schemas import AuditReport, Database, Transcript


ModelT = TypeVar("ModelT", bound=BaseModel)


def _dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"JSON invalido: {e.msg}", location=f"{e.lineno}:{e.colno}") from e


def _validate(model: Type[ModelT], payload: Any) -> ModelT:
    try:
        return model.model_validate(payload)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "<raiz>"
        raise ParseError(f"{model.__name__} invalido: {first['msg']}", location=location) from e


def database_to_json(database: Database) -> str:
    """{"q", "M", "F", "lambda", "K", "files": {"f1,f2,...": [[...]]}}"""
    payload = {
        "q": database.q,
        "M": database.M,
        "F": list(database.F),
        "lambda": database.lam,
        "K": database.K,
        "files": {",".join(map(str, index)): matrix for index, matrix in database.files.items()},
    }
    return _dumps(payload)


def database_from_json(text: str) -> Database:
    payload = _loads(text)
    if not isinstance(payload, dict):
        raise ParseError("Se esperaba un objeto JSON", location="<raiz>")
    try:
        files: Dict[tuple, List[List[int]]] = {
            tuple(int(part) for part in key.split(",")): matrix
            for key, matrix in payload.get("files", {}).items()
        }
    except (AttributeError, ValueError) as e:
        raise ParseError(f"Clave de archivo invalida: {e}", location="files") from e
    renamed = {k: v for k, v in payload.items() if k not in ("lambda", "files")}
    renamed["lam"] = payload.get("lambda")
    renamed["files"] = files
    return _validate(Database, renamed)


def transcript_to_json(transcript: Transcript, include_timing: bool = True) -> str:
    """Sin tiempos, dos ejecuciones con las mismas entradas dan el mismo texto"""
    payload = transcript.model_dump(mode="json")
    if not include_timing:
        payload["metrics"].pop("wall_time", None)
    return _dumps(payload)


def transcript_from_json(text: str) -> Transcript:
    return _validate(Transcript, _loads(text))


def report_to_json(report: AuditReport) -> str:
    return _dumps(report.model_dump(mode="json"))


def report_from_json(text: str) -> AuditReport:
    return _validate(AuditReport, _loads(text))


def reports_to_json(reports: List[AuditReport]) -> str:
    return _dumps([report.model_dump(mode="json") for report in reports])
