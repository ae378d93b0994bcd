"""
Configuracion de logging compartida por la API y el CLI
"""

import logging
import sys
from typing import Optional, TextIO

from pythonjsonlogger import jsonlogger

from .settings import settings


LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(
    level: Optional[str] = None,
    json_output: Optional[bool] = None,
    stream: Optional[TextIO] = None,
) -> None:
    """
    Instalar un unico handler en el logger raiz

    Args:
        level: Nivel de log (por defecto settings.log_level)
        json_output: Registros JSON (por defecto settings.log_json)
        stream: Destino (por defecto stderr, stdout queda para la salida de maquina)
    """
    level = (level or settings.log_level).upper()
    json_output = settings.log_json if json_output is None else json_output

    handler = logging.StreamHandler(stream or sys.stderr)
    if json_output:
        handler.setFormatter(jsonlogger.JsonFormatter('%(asctime)s %(name)s %(levelname)s %(message)s'))
    else:
        handler.setFormatter(logging.Formatter(LOG_FORMAT))

    logging.basicConfig(level=getattr(logging, level), handlers=[handler], force=True)
