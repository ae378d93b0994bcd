"""
Configuracion de settings del simulador de recuperacion privada de informacion
"""

import logging
from pathlib import Path

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Settings de la aplicacion con soporte para variables de entorno"""

    model_config = SettingsConfigDict(
        env_file=".env",  # Archivo de variables de entorno
        env_file_encoding="utf-8",  # Codificacion del archivo
        case_sensitive=False,  # No sensible a mayusculas
        extra="ignore",  # Ignorar variables ajenas al simulador
    )

    # Configuracion de la API
    api_host: str = "0.0.0.0"  # Host donde corre la API
    api_port: int = 8080  # Puerto para la API
    api_env: str = "development"  # Entorno, como desarrollo o produccion
    api_title: str = "Lagrange SPIR Simulator API"  # Titulo de la API
    api_version: str = "1.0.0"  # Version de la API

    # Logging
    log_level: str = "INFO"  # Nivel de logs, como INFO o DEBUG
    log_json: bool = False  # Registros en JSON en vez de texto

    # Protocolo
    default_seed: int = 20240917  # Semilla de la demo y del CLI sin --seed
    max_modulus: int = 2**31  # Mayor q aceptado

    # Auditorias
    chi_square_alpha: float = Field(default=0.01, gt=0, lt=1)  # Significancia global (Bonferroni)
    statistical_trials: int = Field(default=2000, ge=10)  # Ensayos por grupo
    exhaustive_subset_limit: int = 15  # Barrido exhaustivo de subconjuntos si N <= limite
    sampled_subsets: int = 400  # Subconjuntos muestreados por encima del limite

    # Benchmark
    bench_output_dir: Path = Path("./bench_results")  # Directorio de `bench --save`

    @field_validator("log_level")
    def validate_log_level(cls, v):
        level = v.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"Nivel de log invalido: {v}")
        return level

    @property
    def is_production(self) -> bool:
        """Verificar si esta corriendo en entorno de produccion"""
        return self.api_env.lower() == "production"


# Crear instancia global de settings
settings = Settings()
