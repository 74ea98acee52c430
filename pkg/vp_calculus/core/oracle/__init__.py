"""
Brute-force quadrature used to check the symbolic engine.
"""

from vp_calculus.core.oracle.quadrature import (
    QuadResult,
    difference_quotient_integral,
    log_quad,
    multiple_integral_regular,
    neville,
    pv_quad,
)
from vp_calculus.core.oracle.special import dilog, dilog_identity_residual

__all__ = [
    "QuadResult",
    "difference_quotient_integral",
    "dilog",
    "dilog_identity_residual",
    "log_quad",
    "multiple_integral_regular",
    "neville",
    "pv_quad",
]
