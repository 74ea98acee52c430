"""
Quadrature Oracle

This module computes singular integrals by brute force, independently of the
symbolic engine, so the engine can be checked against it.

Simple poles use symmetric excision: the integral with (y - eps, y + eps) cut
out is computed with QUADPACK on an eps schedule eps_k = eps0 * 2^-k and
extrapolated to eps = 0 by Neville's scheme. Higher poles subtract the Taylor
polynomial of the integrand, integrate the remainder conventionally and add
the finite parts of the subtracted powers. Log kernels use QUADPACK's
algebraic-logarithmic weights.
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from scipy import integrate

from vp_calculus.config.settings import Settings, get_settings
from vp_calculus.core.errors import NonConvergent, PoleOutsideInterval
from vp_calculus.core.expr.testfn import CallableTestFn, PolynomialTestFn, TestFn
from vp_calculus.utils.logging import get_logger

logger = get_logger("vp_calculus.oracle")

Function = Union[TestFn, Callable[[float], float]]


@dataclass(frozen=True)
class QuadResult:
    """
    Result of an oracle quadrature.
    """

    value: float
    error_estimate: float
    evaluations: int = 0

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(
            self.value + other.value,
            self.error_estimate + other.error_estimate,
            self.evaluations + other.evaluations,
        )


class _Counter:
    """Wraps a scalar function and counts its calls."""

    def __init__(self, func: Callable[[float], float]):
        self.func = func
        self.calls = 0

    def __call__(self, x: float) -> float:
        self.calls += 1
        return float(self.func(x))


def _as_testfn(f: Function) -> TestFn:
    if isinstance(f, TestFn):
        if f.arity != 1:
            raise ValueError(f"Expected a function of one argument, {f.name} takes {f.arity}")
        return f
    return CallableTestFn(f, 1, name=getattr(f, "__name__", "f"))


def _quad(
    func: Callable[[float], float], a: float, b: float, settings: Settings, tol: Optional[float] = None, **kwargs
) -> QuadResult:
    tol = tol or settings.oracle_tol * 1e-2
    counter = _Counter(func)
    value, error = integrate.quad(
        counter,
        a,
        b,
        epsabs=tol,
        epsrel=tol,
        limit=settings.quad_limit,
        **kwargs,
    )
    return QuadResult(value, error, counter.calls)


def neville(steps: Sequence[float], values: Sequence[float]) -> List[float]:
    """
    Diagonal of Neville's table extrapolating values(step) to step = 0.

    Args:
        steps (Sequence[float]): Distinct abscissae
        values (Sequence[float]): Values at those abscissae

    Returns:
        list: Extrapolants using the first 1, 2, ... points
    """
    table = list(values)
    diagonal = [table[0]]
    for order in range(1, len(steps)):
        for i in range(len(steps) - order):
            left, right = steps[i], steps[i + order]
            table[i] = (right * table[i] - left * table[i + 1]) / (right - left)
        diagonal.append(table[0])
    return diagonal


def _simple_pole(
    f: TestFn, pole: float, a: float, b: float, settings: Settings, points: Sequence[float] = ()
) -> QuadResult:
    reach = min(pole - a, b - pole)
    # odd-part kinks sit at the distances of the rough points from the pole
    kinks = sorted({abs(p - pole) for p in points if 0.0 < abs(p - pole) < reach})

    def odd_part(t: float) -> float:
        return (f(pole + t) - f(pole - t)) / t

    # the part of [a, b] outside the symmetric neighbourhood is regular
    if pole - a < b - pole:
        lo, hi = pole + reach, b
    elif b - pole < pole - a:
        lo, hi = a, pole - reach
    else:
        lo = hi = pole
    if hi > lo:
        inside = sorted(p for p in points if lo < p < hi)
        outer = _quad(lambda x: f(x) / (x - pole), lo, hi, settings, points=inside or None)
    else:
        outer = QuadResult(0.0, 0.0)

    eps0 = settings.excision_eps0 or (b - a) / 8.0
    eps0 = min(eps0, reach / 2.0, *(k / 2.0 for k in kinks))
    schedule = [eps0 * 2.0**-k for k in range(settings.excision_terms)]
    excised = []
    evaluations = outer.evaluations
    error = outer.error_estimate
    for eps in schedule:
        piece = _quad(odd_part, eps, reach, settings, tol=1e-13, points=kinks or None)
        excised.append(piece.value)
        evaluations += piece.evaluations
        error = max(error, piece.error_estimate)

    extrapolants = neville(schedule, excised)
    spread = abs(extrapolants[-1] - extrapolants[-2])
    value = extrapolants[-1] + outer.value
    if spread > settings.cauchy_tol * max(1.0, abs(value)):
        raise NonConvergent(
            f"Excision sequence for the pole at {pole} did not settle: last extrapolants differ by {spread:.3g}"
        )
    return QuadResult(value, spread + error, evaluations)


def _finite_part(power: int, a: float, b: float, pole: float) -> float:
    """Finite-part integral of (x - pole)^power over [a, b]."""
    if power == -1:
        return math.log(abs(b - pole)) - math.log(abs(a - pole))
    return ((b - pole) ** (power + 1) - (a - pole) ** (power + 1)) / (power + 1)


def _higher_pole(
    f: TestFn, pole: float, n: int, a: float, b: float, settings: Settings, points: Sequence[float] = ()
) -> QuadResult:
    taylor = [float(f.derivative((j,))(pole)) / math.factorial(j) for j in range(n)]
    leading = float(f.derivative((n,))(pole)) / math.factorial(n)
    try:
        slope = float(f.derivative((n + 1,))(pole)) / math.factorial(n + 1)
    except ValueError:
        slope = 0.0
    window = 1e-3 * (b - a)

    def remainder(x: float) -> float:
        t = x - pole
        if abs(t) < window:
            return leading + slope * t
        polynomial = sum(c * t**j for j, c in enumerate(taylor))
        return (f(x) - polynomial) / t**n

    left_points = sorted(p for p in points if a < p < pole)
    right_points = sorted(p for p in points if pole < p < b)
    left = _quad(remainder, a, pole, settings, points=left_points or None)
    right = _quad(remainder, pole, b, settings, points=right_points or None)
    finite = sum(c * _finite_part(j - n, a, b, pole) for j, c in enumerate(taylor))
    total = left + right
    return QuadResult(total.value + finite, total.error_estimate, total.evaluations + 3 * n)


def pv_quad(
    f: Function,
    pole: float,
    n: int,
    a: float,
    b: float,
    settings: Optional[Settings] = None,
    points: Sequence[float] = (),
) -> QuadResult:
    """
    Principal value of int_a^b f(x) / (x - pole)^n dx.

    Args:
        f (TestFn or callable): Smooth integrand of one variable
        pole (float): Pole position, strictly inside (a, b)
        n (int): Pole degree
        a (float): Lower limit
        b (float): Upper limit
        settings (Settings, optional): Tolerances and excision schedule
        points (Sequence[float]): Interior points where f has integrable
            singularities, kept away from the pole

    Returns:
        QuadResult: Value and error estimate

    Raises:
        PoleOutsideInterval: If the pole is not strictly inside (a, b)
        NonConvergent: If the excision sequence does not settle
    """
    settings = settings or get_settings()
    if n < 1:
        raise ValueError(f"Pole degree must be positive, got {n}")
    if not a < pole < b:
        raise PoleOutsideInterval(f"Pole {pole} is not inside ({a}, {b})")
    fn = _as_testfn(f)
    if n == 1:
        return _simple_pole(fn, pole, a, b, settings, points)
    return _higher_pole(fn, pole, n, a, b, settings, points)


def log_quad(f: Function, c: float, a: float, b: float, settings: Optional[Settings] = None) -> QuadResult:
    """
    int_a^b ln|x - c| f(x) dx.

    Args:
        f (TestFn or callable): Smooth integrand
        c (float): Log center, inside or outside [a, b]
        a (float): Lower limit
        b (float): Upper limit
        settings (Settings, optional): Tolerances

    Returns:
        QuadResult: Value and error estimate

    Raises:
        NonConvergent: If QUADPACK misses the tolerance
    """
    settings = settings or get_settings()
    fn = _as_testfn(f)
    tol = settings.log_quad_tol

    def weighted(func, lo, hi, weight):
        counter = _Counter(func)
        value, error = integrate.quad(
            counter, lo, hi, weight=weight, wvar=(0.0, 0.0), epsabs=tol * 1e-1, epsrel=tol * 1e-1,
            limit=settings.quad_limit,
        )
        return QuadResult(value, error, counter.calls)

    if a < c < b:
        result = weighted(fn, a, c, "alg-logb") + weighted(fn, c, b, "alg-loga")
    elif c == a:
        result = weighted(fn, a, b, "alg-loga")
    elif c == b:
        result = weighted(fn, a, b, "alg-logb")
    else:
        counter = _Counter(lambda x: math.log(abs(x - c)) * fn(x))
        value, error = integrate.quad(
            counter, a, b, epsabs=tol * 1e-1, epsrel=tol * 1e-1, limit=settings.quad_limit
        )
        result = QuadResult(value, error, counter.calls)

    if result.error_estimate > tol * max(1.0, abs(result.value)):
        raise NonConvergent(f"Log-weighted quadrature missed {tol:g}: error estimate {result.error_estimate:.3g}")
    return result


def _monomial(power: int) -> PolynomialTestFn:
    return PolynomialTestFn.from_mapping(1, {(power,): 1}, name=f"z^{power}")


def _pole_moment(power: int, n: int, x: float, a: float, b: float, settings: Settings) -> Tuple[float, float]:
    """int_a^b z^power VP 1/(x - z)^n dz as (value, error)."""
    sign = (-1) ** n
    if a < x < b:
        result = pv_quad(_monomial(power), x, n, a, b, settings)
    else:
        result = _quad(lambda z: z**power / (x - z) ** n, a, b, settings)
        sign = 1
    return sign * result.value, result.error_estimate


def _polynomial_regular(
    degrees: Sequence[int], u: PolynomialTestFn, cube: Sequence[Tuple[float, float]], settings: Settings
) -> QuadResult:
    (x_lo, x_hi), inner = cube[0], cube[1:]
    monomials = list(u.as_dict().items())
    errors: Dict[str, float] = {"inner": 0.0}
    moments: Dict[Tuple[int, int, float, int], Tuple[float, float]] = {}

    def outer(x: float) -> float:
        total = 0.0
        for exponents, coefficient in monomials:
            value = float(coefficient) * x ** exponents[0]
            for power, n, (lo, hi) in zip(exponents[1:], degrees, inner):
                key = (power, n, x, id(inner))
                if key not in moments:
                    moments[key] = _pole_moment(power, n, x, lo, hi, settings)
                moment, error = moments[key]
                value *= moment
                errors["inner"] = max(errors["inner"], error)
            total += value
        return total

    breaks = sorted({p for bounds in inner for p in bounds if x_lo < p < x_hi})
    result = _quad(outer, x_lo, x_hi, settings, points=breaks or None)
    return QuadResult(result.value, result.error_estimate + errors["inner"] * (x_hi - x_lo), result.evaluations)


def _nested_regular(
    degrees: Sequence[int], u: TestFn, cube: Sequence[Tuple[float, float]], settings: Settings
) -> QuadResult:
    m = len(degrees)
    (x_lo, x_hi), inner = cube[0], cube[1:]

    def level(j: int, x: float, zs: Tuple[float, ...]) -> float:
        if j == m:
            return float(u(x, *zs))
        lo, hi = inner[j]
        n = degrees[j]

        def integrand(z: float) -> float:
            return level(j + 1, x, zs + (z,))

        if lo < x < hi:
            value = pv_quad(CallableTestFn(integrand, 1), x, n, lo, hi, settings).value
            return (-1) ** n * value
        return _quad(lambda z: integrand(z) / (x - z) ** n, lo, hi, settings).value

    breaks = sorted({p for bounds in inner for p in bounds if x_lo < p < x_hi})
    return _quad(lambda x: level(0, x, ()), x_lo, x_hi, settings, points=breaks or None)


def multiple_integral_regular(
    degrees: Sequence[int],
    u: Optional[TestFn] = None,
    cube: Optional[Sequence[Tuple[float, float]]] = None,
    settings: Optional[Settings] = None,
) -> QuadResult:
    """
    Regular-order integral of prod_i VP 1/(x - z_i)^(n_i) u(x, z_1, ..., z_m).

    Each z_i is integrated first as a principal value with x fixed; x is
    integrated last, its integrand being log-singular where x meets a z bound.
    Polynomial weights factor over monomials, so each inner integral is a
    one-dimensional pv_quad.

    Args:
        degrees (Sequence[int]): Pole degrees n_1..n_m
        u (TestFn, optional): Weight of arity m + 1 in (x, z_1, ..., z_m); 1 if omitted
        cube (Sequence[tuple], optional): Bounds for x, z_1, ..., z_m; unit cube if omitted
        settings (Settings, optional): Tolerances

    Returns:
        QuadResult: Value and error estimate
    """
    settings = settings or get_settings()
    m = len(degrees)
    if m < 1:
        raise ValueError("At least one pole is required")
    cube = [tuple(map(float, bounds)) for bounds in (cube or [(0.0, 1.0)] * (m + 1))]
    if len(cube) != m + 1:
        raise ValueError(f"Expected {m + 1} bounds, got {len(cube)}")
    if u is None:
        u = PolynomialTestFn.constant(1, m + 1)
    if u.arity != m + 1:
        raise ValueError(f"Weight takes {u.arity} arguments, expected {m + 1}")

    logger.debug(f"Regular-order integral with degrees {list(degrees)} over {cube}")
    if isinstance(u, PolynomialTestFn):
        return _polynomial_regular(tuple(degrees), u, cube, settings)
    return _nested_regular(tuple(degrees), u, cube, settings)


def difference_quotient_integral(
    g: Callable[[float], float],
    g_prime: Callable[[float], float],
    a: float,
    b: float,
    settings: Optional[Settings] = None,
) -> QuadResult:
    """
    int_a^b int_a^b (g(s) - g(t)) / (s - t) ds dt.

    The diagonal is removable; within a relative 1e-7 of it the quotient is
    replaced by g'(s). Nodes that round onto a closed end contribute nothing,
    so g is only ever evaluated inside (a, b).

    Args:
        g (callable): Function on (a, b), may be log-singular at the ends
        g_prime (callable): Its derivative
        a (float): Lower bound
        b (float): Upper bound
        settings (Settings, optional): Tolerances

    Returns:
        QuadResult: Value and error estimate
    """
    settings = settings or get_settings()
    cutoff = 1e-7 * (b - a)

    def quotient(s: float, t: float) -> float:
        if not (a < s < b and a < t < b):
            return 0.0
        if abs(s - t) < cutoff:
            return g_prime(0.5 * (s + t))
        return (g(s) - g(t)) / (s - t)

    def inner(t: float) -> float:
        points = [t] if a < t < b else None
        return _quad(lambda s: quotient(s, t), a, b, settings, points=points).value

    return _quad(inner, a, b, settings)
