"""
Special Functions

The dilogarithm in the convention dilog(z) = int_1^z ln(t) / (1 - t) dt,
which equals Li2(1 - z) in the more common convention. scipy's ``spence``
uses exactly this definition.
"""

import math
from typing import Union

import numpy as np
from scipy import special

from vp_calculus.core.errors import DomainError

ArrayLike = Union[float, np.ndarray]


def dilog(z: ArrayLike) -> ArrayLike:
    """
    Dilogarithm int_1^z ln(t) / (1 - t) dt on the positive real axis.

    Args:
        z (float or ndarray): Argument(s), all strictly positive

    Returns:
        float or ndarray: dilog(z), with the shape of the input

    Raises:
        DomainError: If any argument is not strictly positive
    """
    values = np.asarray(z, dtype=float)
    if np.any(~np.isfinite(values)) or np.any(values <= 0.0):
        raise DomainError(f"dilog is defined here for z > 0 only, got {z!r}")
    result = special.spence(values)
    if np.ndim(result) == 0:
        return float(result)
    return result


def dilog_identity_residual(z: ArrayLike) -> ArrayLike:
    """
    Residual of 2 dilog(1 + 1/z) + 2 dilog(1 + z) + ln(z)^2 + pi^2/3 = 0.

    The two closed forms of the simplex integral agree exactly when this
    vanishes.

    Args:
        z (float or ndarray): Positive argument(s)

    Returns:
        float or ndarray: The residual
    """
    values = np.asarray(z, dtype=float)
    if np.any(values <= 0.0):
        raise DomainError(f"The reflection identity needs z > 0, got {z!r}")
    residual = 2.0 * dilog(1.0 + 1.0 / values) + 2.0 * dilog(1.0 + values) + np.log(values) ** 2 + math.pi**2 / 3.0
    if np.ndim(residual) == 0:
        return float(residual)
    return residual
