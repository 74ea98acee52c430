"""
Numeric Integration Rules

This module evaluates one-dimensional integrals of delta-free expressions once
every other variable has a value. It is what DeferredIntegral factors and the
final steps of a repeated integration run on.

The interval is cut at every singular point (log roots, pole roots, guard
jumps, kinks of inner integrals). Plain panels use tanh-sinh quadrature, which
tolerates log singularities at panel ends. A principal-value pole gets a
symmetric window where the Taylor polynomial of the regular part is
subtracted and integrated in closed form, and the remainder goes through
Gauss-Legendre.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from vp_calculus.config.settings import Settings, get_settings
from vp_calculus.core.errors import DeltaNotEvaluable, SingularEvaluation
from vp_calculus.core.expr.affine import AffineExpr, Var
from vp_calculus.core.expr.expr import (
    DeferredIntegral,
    DistExpr,
    DistTerm,
    differentiate,
    evaluate_numeric,
)
from vp_calculus.core.expr.factors import DeltaDeriv, Factor, HeavisideGuard, LogAbs, VPPole


@dataclass(frozen=True)
class NumericEstimate:
    """
    Value of a numeric integral with an error estimate.
    """

    value: float
    error: float = 0.0
    evaluations: int = 0

    def __add__(self, other: "NumericEstimate") -> "NumericEstimate":
        return NumericEstimate(
            self.value + other.value, self.error + other.error, self.evaluations + other.evaluations
        )


@lru_cache(maxsize=16)
def _tanh_sinh_rule(step: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Tanh-sinh rule on [-1, 1].

    Returns (k, weights, gaps, sides): ``gaps`` is the distance from the node
    to its nearer endpoint and ``sides`` is -1, 0 or +1 for the half it lies in.
    """
    k_max = int(math.ceil(4.0 / step))
    k = np.arange(-k_max, k_max + 1)
    t = k * step
    u = 0.5 * math.pi * np.sinh(t)
    weights = 0.5 * math.pi * np.cosh(t) / np.cosh(u) ** 2
    gaps = 2.0 / (1.0 + np.exp(2.0 * np.abs(u)))
    keep = gaps > 1e-300
    return k[keep], weights[keep], gaps[keep], np.sign(t[keep])


def tanh_sinh(func, lo: float, hi: float, step: float, margin: float = 0.0) -> NumericEstimate:
    """
    Integrate ``func`` over [lo, hi] by tanh-sinh quadrature.

    The error estimate is the difference to the rule with twice the step.
    Nodes closer than ``margin`` to a limit are dropped.

    Args:
        func: Vectorized integrand
        lo (float): Lower limit
        hi (float): Upper limit
        step (float): Step in the transformed variable
        margin (float): Minimum distance of a node from either limit

    Returns:
        NumericEstimate: Value and error estimate
    """
    if hi <= lo:
        return NumericEstimate(0.0)
    k, weights, gaps, sides = _tanh_sinh_rule(step)
    half = 0.5 * (hi - lo)
    nodes = np.where(sides < 0, lo + half * gaps, np.where(sides > 0, hi - half * gaps, lo + half))
    keep = (nodes - lo > margin) & (hi - nodes > margin)
    values = np.zeros_like(nodes)
    values[keep] = np.asarray(func(nodes[keep]), dtype=float) * np.ones(int(keep.sum()))
    fine = half * step * float(np.sum(weights * values))
    even = (k % 2) == 0
    coarse = half * 2.0 * step * float(np.sum(weights[even] * values[even]))
    return NumericEstimate(fine, abs(fine - coarse), int(keep.sum()))


@lru_cache(maxsize=8)
def _legendre(count: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(count)


def _symmetric_power_integral(power: int, radius: float) -> float:
    """Finite-part integral of t^power over [-radius, radius]."""
    if power == -1:
        return 0.0
    return (radius ** (power + 1) - (-radius) ** (power + 1)) / (power + 1)


def _term_expr(term: DistTerm) -> DistExpr:
    return DistExpr((term,))


def _root(arg: AffineExpr, var: Var, assignment: Mapping[Var, float]) -> float:
    slope = arg.coeff(var)
    return -float(arg.drop(var).evaluate(assignment)) / float(slope)


def _inner_kinks(factor: DeferredIntegral, var: Var, assignment: Mapping[Var, float]) -> List[float]:
    """Values of ``var`` where an inner singular point meets an inner limit."""
    points = []
    candidates: List[AffineExpr] = [factor.upper - factor.lower]
    for term in factor.body.terms:
        for inner in term.factors:
            arg = getattr(inner, "arg", None)
            if arg is None:
                continue
            if arg.depends_on(factor.var):
                crossing = -arg.drop(factor.var).scale(1 / arg.coeff(factor.var))
                candidates.extend([crossing - factor.lower, crossing - factor.upper])
            else:
                candidates.append(arg)
    for candidate in candidates:
        if candidate.depends_on(var):
            points.append(_root(candidate, var, assignment))
    return points


def _constant_factor(factor: Factor, assignment: Mapping[Var, float]) -> float:
    return float(factor.evaluate(assignment))


def _pv_window(
    rest: DistExpr,
    var: Var,
    center: float,
    degree: int,
    radius: float,
    assignment: Mapping[Var, float],
    nodes: int,
) -> NumericEstimate:
    """
    PV integral of rest(x) / (x - center)^degree over the symmetric window.
    """
    at_center = dict(assignment)
    at_center[var] = center
    taylor = []
    derivative = rest
    for j in range(degree):
        taylor.append(float(evaluate_numeric(derivative, at_center)) / math.factorial(j))
        if j + 1 < degree:
            derivative = differentiate(derivative, var)

    def remainder(t: np.ndarray) -> np.ndarray:
        env = dict(assignment)
        env[var] = center + t
        values = np.asarray(evaluate_numeric(rest, env), dtype=float) * np.ones_like(t)
        polynomial = np.zeros_like(t)
        for j, coefficient in enumerate(taylor):
            polynomial = polynomial + coefficient * t**j
        return (values - polynomial) / t**degree

    def gauss(count: int) -> float:
        points, weights = _legendre(count)
        return radius * float(np.sum(weights * remainder(radius * points)))

    fine = gauss(nodes)
    coarse = gauss(max(nodes // 2, 2))
    finite_part = sum(
        coefficient * _symmetric_power_integral(j - degree, radius) for j, coefficient in enumerate(taylor)
    )
    return NumericEstimate(fine + finite_part, abs(fine - coarse), nodes + nodes // 2)


def _integrate_term(
    term: DistTerm, var: Var, lo: float, hi: float, assignment: Mapping[Var, float], settings: Settings
) -> NumericEstimate:
    coeff = term.coeff
    factors: List[Factor] = []
    scale = 1.0
    for factor in term.factors:
        if isinstance(factor, DeltaDeriv):
            raise DeltaNotEvaluable(f"{factor.to_text()} cannot be integrated numerically")
        if isinstance(factor, LogAbs) and factor.order and factor.depends_on(var):
            weight, pole = factor.as_pole()
            coeff = coeff * weight
            factors.append(pole)
        elif isinstance(factor, HeavisideGuard):
            if not factor.depends_on(var):
                scale *= _constant_factor(factor, assignment)
                continue
            edge = _root(factor.arg, var, assignment)
            if factor.arg.coeff(var) > 0:
                lo = max(lo, edge)
            else:
                hi = min(hi, edge)
        else:
            factors.append(factor)
    if scale == 0.0 or hi <= lo:
        return NumericEstimate(0.0)

    term = DistTerm(coeff, tuple(factors))
    tolerance = settings.singular_tol * max(1.0, abs(lo), abs(hi))

    poles: Dict[float, Tuple[VPPole, float]] = {}
    points = set()
    for factor in factors:
        if isinstance(factor, VPPole) and factor.depends_on(var):
            root = _root(factor.arg, var, assignment)
            if abs(root - lo) <= tolerance or abs(root - hi) <= tolerance:
                raise SingularEvaluation(f"{factor.to_text()} is singular at an integration limit")
            if lo < root < hi:
                if any(abs(root - other) <= tolerance for other in poles):
                    raise SingularEvaluation(f"Coinciding pole roots at {var}={root}")
                poles[root] = (factor, float(factor.arg.coeff(var)))
        elif isinstance(factor, LogAbs) and factor.depends_on(var):
            points.add(_root(factor.arg, var, assignment))
        elif isinstance(factor, DeferredIntegral) and factor.depends_on(var):
            points.update(_inner_kinks(factor, var, assignment))
    points = {p for p in points if lo + tolerance < p < hi - tolerance}

    def integrand(x: np.ndarray) -> np.ndarray:
        env = dict(assignment)
        env[var] = x
        return scale * np.asarray(evaluate_numeric(_term_expr(term), env), dtype=float)

    anchors = sorted(points | set(poles) | {lo, hi})
    windows = []
    for root, (pole, slope) in poles.items():
        radius = 0.5 * min(abs(root - p) for p in anchors if p != root)
        windows.append((root, radius, pole, slope))

    result = NumericEstimate(0.0)
    edges = set(points) | {lo, hi}
    for root, radius, pole, slope in windows:
        rest = DistExpr((DistTerm(term.coeff, term.without(pole)),))
        window = _pv_window(rest, var, root, pole.degree, radius, assignment, settings.pv_window_nodes)
        weight = scale * slope ** -pole.degree
        result = result + NumericEstimate(
            weight * window.value, abs(weight) * window.error, window.evaluations
        )
        edges.update((root - radius, root + radius))

    cuts = sorted(edges)
    for left, right in zip(cuts, cuts[1:]):
        if any(abs(left - (root - radius)) <= tolerance and abs(right - (root + radius)) <= tolerance
               for root, radius, _, _ in windows):
            continue
        result = result + tanh_sinh(integrand, left, right, settings.de_step, 4.0 * tolerance)
    return result


def integrate_expression(
    body: DistExpr,
    var: Var,
    lower: AffineExpr,
    upper: AffineExpr,
    assignment: Mapping[Var, float],
    settings: Optional[Settings] = None,
) -> NumericEstimate:
    """
    Integrate ``body`` over ``var`` between two limits at fixed outer values.

    Args:
        body (DistExpr): Delta-free integrand
        var (str): Integration variable
        lower (AffineExpr): Lower limit
        upper (AffineExpr): Upper limit
        assignment (Mapping[str, float]): Values of every other variable
        settings (Settings, optional): Numeric settings

    Returns:
        NumericEstimate: The integral

    Raises:
        DeltaNotEvaluable: If the body still holds a delta
        SingularEvaluation: If a pole sits on a limit
    """
    settings = settings or get_settings()
    a = float(lower.evaluate(assignment))
    b = float(upper.evaluate(assignment))
    if a == b:
        return NumericEstimate(0.0)
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0
    total = NumericEstimate(0.0)
    for term in body.terms:
        total = total + _integrate_term(term, var, a, b, assignment, settings)
    return NumericEstimate(sign * total.value, total.error, total.evaluations)
