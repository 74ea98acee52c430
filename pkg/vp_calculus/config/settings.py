"""
Application Settings Module

This module provides access to numeric tolerances, logging options and API
settings from environment variables and an optional .env file. Every variable
is read with the VPCALC_ prefix, e.g. VPCALC_ORACLE_TOL.
"""

from functools import lru_cache
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load environment variables from .env file
load_dotenv()


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables.
    """

    model_config = SettingsConfigDict(
        env_prefix="VPCALC_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging settings
    log_level: str = Field(default="INFO")
    log_file: Optional[str] = Field(default=None)

    # Oracle settings
    oracle_tol: float = Field(default=1e-8, gt=0)
    excision_eps0: Optional[float] = Field(default=None, gt=0)
    excision_terms: int = Field(default=8, ge=3)
    cauchy_tol: float = Field(default=1e-9, gt=0)
    log_quad_tol: float = Field(default=1e-10, gt=0)
    quad_limit: int = Field(default=200, ge=10)

    # Engine settings
    de_step: float = Field(default=0.1, gt=0, le=0.5)
    pv_window_nodes: int = Field(default=32, ge=4)
    singular_tol: float = Field(default=1e-12, gt=0)

    # Scenario settings
    seed: int = Field(default=20240601)
    csv_digits: int = Field(default=15, ge=6, le=17)
    max_workers: int = Field(default=1, ge=1)

    # API settings
    api_host: str = Field(default="127.0.0.1")
    api_port: int = Field(default=8000)

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level {value!r}")
        return level


@lru_cache()
def get_settings() -> Settings:
    """
    Get application settings.

    Returns:
        Settings: Application settings
    """
    return Settings()


def get_oracle_settings() -> Dict[str, Any]:
    """
    Get quadrature oracle settings.

    Returns:
        dict: Oracle settings
    """
    settings = get_settings()

    return {
        "tol": settings.oracle_tol,
        "eps0": settings.excision_eps0,
        "terms": settings.excision_terms,
        "cauchy_tol": settings.cauchy_tol,
        "log_quad_tol": settings.log_quad_tol,
        "limit": settings.quad_limit,
    }


def get_engine_settings() -> Dict[str, Any]:
    """
    Get numeric engine settings.

    Returns:
        dict: Engine settings
    """
    settings = get_settings()

    return {
        "de_step": settings.de_step,
        "pv_window_nodes": settings.pv_window_nodes,
        "singular_tol": settings.singular_tol,
    }


def get_api_settings() -> Dict[str, Any]:
    """
    Get API server settings.

    Returns:
        dict: API settings
    """
    settings = get_settings()

    return {"host": settings.api_host, "port": settings.api_port}
