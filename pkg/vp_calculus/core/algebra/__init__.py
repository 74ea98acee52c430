"""
Exact coefficient arithmetic for vp_calculus.
"""

from vp_calculus.core.algebra.coeff import (
    PiCoeff,
    coeff_add,
    coeff_mul,
    coeff_to_float,
    format_coeff,
    parse_coeff,
)

__all__ = [
    "PiCoeff",
    "coeff_add",
    "coeff_mul",
    "coeff_to_float",
    "format_coeff",
    "parse_coeff",
]
