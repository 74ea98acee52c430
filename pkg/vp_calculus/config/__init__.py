"""
Configuration for the VP calculus toolkit.

This package holds the settings layer: tolerances for the quadrature oracle
and the numeric engine, logging options and the HTTP server address.
"""

from vp_calculus.config.settings import (
    Settings,
    get_api_settings,
    get_engine_settings,
    get_oracle_settings,
    get_settings,
)

__all__ = [
    "Settings",
    "get_api_settings",
    "get_engine_settings",
    "get_oracle_settings",
    "get_settings",
]
