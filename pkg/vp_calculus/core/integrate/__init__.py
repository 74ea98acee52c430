"""
Integration of distribution expressions.

The engine module rewrites integrals symbolically, one variable at a time;
the numeric module evaluates what is left as deferred integrals.
"""

from vp_calculus.core.integrate.engine import (
    AUTO,
    DERIVATIVE,
    EXPLICIT,
    IntegrationResult,
    IntegrationSpec,
    IntegrationStep,
    evaluate_result,
    integrate_delta,
    integrate_separable,
    integrate_step,
    integrate_symbolic,
    integrate_vp_term,
    parse_spec,
    repeated_integrate,
)
from vp_calculus.core.integrate.numeric import NumericEstimate, integrate_expression, tanh_sinh

__all__ = [
    "AUTO",
    "DERIVATIVE",
    "EXPLICIT",
    "IntegrationResult",
    "IntegrationSpec",
    "IntegrationStep",
    "NumericEstimate",
    "evaluate_result",
    "integrate_delta",
    "integrate_expression",
    "integrate_separable",
    "integrate_step",
    "integrate_symbolic",
    "integrate_vp_term",
    "parse_spec",
    "repeated_integrate",
    "tanh_sinh",
]
