"""
Verification Scenarios

This module reproduces the worked results of the VP calculus as executable
checks: the unit-cube determination of the delta-chain constant C2, the
simplex integral I(z) by its two closed forms, the symbolic pipeline and the
quadrature oracle, and the acceptance suite that runs them all.

Every check produces a ScenarioReport. Failures are reported, not raised.
"""

import csv
import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from vp_calculus.config.settings import Settings, get_settings
from vp_calculus.core.errors import DomainError, ThresholdUndefined, VPCalculusError
from vp_calculus.core.expr.affine import AffineExpr
from vp_calculus.core.expr.expr import DistExpr
from vp_calculus.core.expr.factors import VPPole
from vp_calculus.core.expr.parser import parse_expr
from vp_calculus.core.expr.testfn import CallableTestFn, PolynomialTestFn
from vp_calculus.core.integrate.engine import IntegrationResult, IntegrationSpec, parse_spec, repeated_integrate
from vp_calculus.core.oracle.quadrature import (
    difference_quotient_integral,
    multiple_integral_regular,
    pv_quad,
)
from vp_calculus.core.oracle.special import dilog, dilog_identity_residual
from vp_calculus.core.reduction import (
    canonicalize,
    four_pole_closed_form,
    reduce_pair_general,
    reduce_product,
    three_pole_closed_form,
)
from vp_calculus.utils.logging import get_context_logger, get_logger
from vp_calculus.utils.sampling import make_rng, random_polynomial

logger = get_logger("vp_calculus.scenarios")

PI2 = math.pi**2
ROUTES = ("A", "B", "both")
CSV_COLUMNS = ("name", "computed", "expected", "abs_error", "passed", "runtime_ms")

SIMPLEX_EXPRESSION = "-VP[1/(eta+xi/2-1)]*VP[1/(eta-xi/2+1)]"
SIMPLEX_SPEC = "eta=-xi/2..xi/2, xi=0..2+z"


@dataclass
class ScenarioReport:
    """
    Outcome of one verification check.
    """

    name: str
    computed: float
    expected: float
    abs_error: float
    passed: bool
    runtime_ms: float
    tolerance: float = 0.0
    reference: str = ""
    details: Dict[str, float] = field(default_factory=dict)
    message: Optional[str] = None

    @property
    def margin(self) -> float:
        """How far the error stays below the tolerance, as a fraction of it."""
        if self.tolerance <= 0 or not math.isfinite(self.abs_error):
            return float("-inf")
        return 1.0 - self.abs_error / self.tolerance

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "computed": self.computed,
            "expected": self.expected,
            "abs_error": self.abs_error,
            "passed": self.passed,
            "runtime_ms": self.runtime_ms,
            "tolerance": self.tolerance,
            "reference": self.reference,
            "details": dict(self.details),
            "message": self.message,
        }


def make_report(
    name: str,
    computed: float,
    expected: float,
    tolerance: float,
    started: float,
    reference: str = "",
    details: Optional[Dict[str, float]] = None,
) -> ScenarioReport:
    """
    Build a report from a computed and an expected value.

    Args:
        name (str): Stable identifier
        computed (float): Value under test
        expected (float): Reference value
        tolerance (float): Largest accepted absolute error
        started (float): ``time.perf_counter()`` at the start of the check
        reference (str): Human-readable form of the expected value
        details (dict, optional): Further values worth reporting

    Returns:
        ScenarioReport: The report
    """
    error = abs(computed - expected)
    runtime = (time.perf_counter() - started) * 1e3
    return ScenarioReport(
        name=name,
        computed=float(computed),
        expected=float(expected),
        abs_error=float(error),
        passed=bool(error <= tolerance),
        runtime_ms=runtime,
        tolerance=tolerance,
        reference=reference,
        details=dict(details or {}),
    )


def _failed(name: str, error: Exception, started: float, tolerance: float) -> ScenarioReport:
    return ScenarioReport(
        name=name,
        computed=float("nan"),
        expected=float("nan"),
        abs_error=float("inf"),
        passed=False,
        runtime_ms=(time.perf_counter() - started) * 1e3,
        tolerance=tolerance,
        message=f"{type(error).__name__}: {error}",
    )


# Unit cube


def _bracket_log(z: float) -> float:
    return math.log(1.0 - z) - math.log(z)


def _bracket_log_prime(z: float) -> float:
    return -1.0 / (1.0 - z) - 1.0 / z


def cube_c2_determination(
    settings: Optional[Settings] = None, tolerance_scale: float = 1.0
) -> Tuple[ScenarioReport, ScenarioReport, ScenarioReport]:
    """
    Fix the delta-chain constant of the two-pole reduction on the unit cube.

    The regular order (z1, z2 first, x last) is computed by the oracle. The
    bracket term of the reduction, integrated over x first, is the double
    integral of the difference quotient of L(z) = ln(1 - z) - ln(z). The
    delta chain integrates to 1 over the cube, so C2 = regular - bracket.

    Args:
        settings (Settings, optional): Oracle tolerances
        tolerance_scale (float): Multiplies every acceptance tolerance

    Returns:
        tuple: Reports for the regular order, the bracket term and C2
    """
    settings = settings or get_settings()
    scenario_logger = get_context_logger("vp_calculus.scenarios", {"scenario": "cube"})

    started = time.perf_counter()
    regular = multiple_integral_regular([1, 1], settings=settings)
    regular_report = make_report(
        "cube.regular_order", regular.value, PI2 / 3.0, 1e-6 * tolerance_scale, started, "pi^2/3",
        {"error_estimate": regular.error_estimate},
    )
    scenario_logger.info(f"Regular order: {regular.value:.12g}")

    started = time.perf_counter()
    bracket = difference_quotient_integral(_bracket_log, _bracket_log_prime, 0.0, 1.0, settings)
    bracket_report = make_report(
        "cube.bracket_term", bracket.value, -2.0 * PI2 / 3.0, 1e-6 * tolerance_scale, started, "-2*pi^2/3",
        {"error_estimate": bracket.error_estimate},
    )
    scenario_logger.info(f"Bracket term: {bracket.value:.12g}")

    started = time.perf_counter()
    delta_chain_integral = 1.0
    c2 = (regular.value - bracket.value) / delta_chain_integral
    c2_report = make_report(
        "cube.c2", c2, PI2, 1e-5 * tolerance_scale, started, "pi^2",
        {"regular_order": regular.value, "bracket_term": bracket.value},
    )
    scenario_logger.info(f"Inferred C2 = {c2:.12g}")
    return regular_report, bracket_report, c2_report


# Simplex integral


def simplex_route_a(z: float) -> float:
    """
    I(z) = 2 dilog(1 + 1/z) + ln(z)^2 - pi^2/6, valid for z > 0.

    Raises:
        DomainError: If z <= 0
    """
    if z <= 0:
        raise DomainError(f"Route A holds above threshold only, got z={z}")
    return 2.0 * dilog(1.0 + 1.0 / z) + math.log(z) ** 2 - PI2 / 6.0


def simplex_route_b(z: float) -> float:
    """
    I(z) = -2 dilog(1 + z) + pi^2/2 - pi^2 theta(z), valid for z > -1, z != 0.

    Raises:
        ThresholdUndefined: At z = 0
        DomainError: If z <= -1
    """
    if z == 0:
        raise ThresholdUndefined("I(z) is not defined at the threshold z=0")
    if z <= -1:
        raise DomainError(f"Route B holds for z > -1 only, got z={z}")
    step = 1.0 if z > 0 else 0.0
    return -2.0 * dilog(1.0 + z) + PI2 / 2.0 - PI2 * step


def simplex_one_sided_limits() -> Dict[str, float]:
    """
    Limits of I(z) as z approaches the threshold from above and below.

    Returns:
        dict: ``plus``, ``minus`` and ``jump`` (plus - minus)
    """
    continuous = -2.0 * dilog(1.0) + PI2 / 2.0
    plus = continuous - PI2
    minus = continuous
    return {"plus": plus, "minus": minus, "jump": plus - minus}


def simplex_symbolic(z: float, settings: Optional[Settings] = None) -> IntegrationResult:
    """
    I(z) through the symbolic pipeline in the rotated variables
    xi = x + y, eta = (x - y)/2: the pole pair in eta is reduced, both steps
    are integrated by the engine and the remaining log integral over xi is
    evaluated numerically.

    Raises:
        ThresholdUndefined: At z = 0
    """
    if z == 0:
        raise ThresholdUndefined("I(z) is not defined at the threshold z=0")
    return repeated_integrate(
        parse_expr(SIMPLEX_EXPRESSION), parse_spec(SIMPLEX_SPEC), params={"z": z}, settings=settings
    )


def simplex_oracle(z: float, settings: Optional[Settings] = None) -> float:
    """
    I(z) in the regular order: y first, which leaves ln|1 + z - x|, then the
    principal value in x by the quadrature oracle.

    Raises:
        ThresholdUndefined: At z = 0
        DomainError: If z <= -1, where the pole in x leaves the domain
    """
    if z == 0:
        raise ThresholdUndefined("I(z) is not defined at the threshold z=0")
    if z <= -1:
        raise DomainError(f"The regular-order oracle needs z > -1, got z={z}")
    inner = CallableTestFn(lambda x: math.log(abs(1.0 + z - x)), 1, name="inner")
    return pv_quad(inner, 1.0, 1, 0.0, 2.0 + z, settings, points=[1.0 + z]).value


def simplex_I(
    z: float,
    route: str = "B",
    one_sided: bool = False,
    settings: Optional[Settings] = None,
    tolerance_scale: float = 1.0,
) -> ScenarioReport:
    """
    Evaluate the simplex integral I(z).

    ``computed`` holds the requested route (route B for ``both``). The
    expected value is route A above threshold and the oracle below it; route
    A itself is checked against route B. With ``both`` the details hold all
    four values: both closed forms, the symbolic pipeline and the oracle.

    Args:
        z (float): Distance from the threshold
        route (str): ``A``, ``B`` or ``both``
        one_sided (bool): At z = 0, report the one-sided limits instead of failing
        settings (Settings, optional): Numeric settings
        tolerance_scale (float): Multiplies the acceptance tolerance

    Returns:
        ScenarioReport: The report

    Raises:
        ThresholdUndefined: At z = 0 without ``one_sided``
        DomainError: If the requested route does not hold at z
    """
    if route not in ROUTES:
        raise ValueError(f"Unknown route {route!r}, expected one of {', '.join(ROUTES)}")
    settings = settings or get_settings()
    scenario_logger = get_context_logger("vp_calculus.scenarios", {"scenario": "simplex", "z": z})
    started = time.perf_counter()

    if z == 0:
        if not one_sided:
            raise ThresholdUndefined("I(z) is not defined at the threshold z=0; request one-sided limits")
        limits = simplex_one_sided_limits()
        return make_report(
            "simplex.threshold", limits["jump"], -PI2, 1e-9 * tolerance_scale, started, "-pi^2",
            {"limit_plus": limits["plus"], "limit_minus": limits["minus"]},
        )

    details: Dict[str, float] = {}
    if route == "A":
        computed = simplex_route_a(z)
        expected, reference, tolerance = simplex_route_b(z), "route B", 1e-10
        details["route_a"] = computed
    else:
        computed = simplex_route_b(z)
        details["route_b"] = computed
        if z > 0:
            expected, reference, tolerance = simplex_route_a(z), "route A", 1e-10
            details["route_a"] = expected
        else:
            expected, reference, tolerance = simplex_oracle(z, settings), "oracle", 1e-6
            details["oracle"] = expected
        if route == "both":
            details.setdefault("oracle", simplex_oracle(z, settings))
            symbolic = simplex_symbolic(z, settings)
            details["symbolic"] = symbolic.value
            details["symbolic_error"] = symbolic.error
            tolerance = 1e-6

    report = make_report(f"simplex.{route}", computed, expected, tolerance * tolerance_scale, started, reference, details)
    if route == "both":
        values = [details[key] for key in ("route_b", "oracle", "symbolic")] + [expected]
        spread = max(values) - min(values)
        report.abs_error = spread
        report.passed = spread <= report.tolerance
    scenario_logger.info(f"route={route} computed={computed:.12g} expected={expected:.12g}")
    return report


# Acceptance suite


def _check(name: str, tolerance: float, reference: str, compute: Callable[[], Tuple[float, float, Dict[str, float]]]):
    def run() -> List[ScenarioReport]:
        started = time.perf_counter()
        try:
            computed, expected, details = compute()
        except VPCalculusError as exc:
            logger.warning(f"Scenario {name} raised {exc}")
            return [_failed(name, exc, started, tolerance)]
        except Exception as exc:
            logger.exception(f"Scenario {name} crashed")
            return [_failed(name, exc, started, tolerance)]
        return [make_report(name, computed, expected, tolerance, started, reference, details)]

    return run


def _guarded(name: str, run: Callable[[], List[ScenarioReport]]) -> Callable[[], List[ScenarioReport]]:
    def guarded() -> List[ScenarioReport]:
        started = time.perf_counter()
        try:
            return run()
        except Exception as exc:
            logger.exception(f"Scenario group {name} crashed")
            return [_failed(name, exc, started, 0.0)]

    return guarded


def _reduction_defining_property(settings: Settings) -> Tuple[float, float, Dict[str, float]]:
    reduced = reduce_product("x", [(AffineExpr.var("z1"), 1), (AffineExpr.var("z2"), 1)])
    result = repeated_integrate(reduced, parse_spec("x=0..1, z1=0..1, z2=0..1"), settings=settings)
    return result.value, PI2 / 3.0, {"error_estimate": result.error}


def _order_independence(n: int, count: int, settings: Settings) -> Tuple[float, float, Dict[str, float]]:
    rng = make_rng(settings.seed + n)
    x, z = AffineExpr.var("x"), AffineExpr.var("z")
    pole = DistExpr.product(VPPole(x - z, n))
    worst, first, second = 0.0, 0.0, 0.0
    for index in range(count):
        u = random_polynomial(rng, 2, degree=4, bump_power=n, name=f"u{index}")
        a = repeated_integrate(pole, IntegrationSpec.of(("x", 0, 1), ("z", 0, 1)), u=u, u_args=("x", "z"), settings=settings)
        b = repeated_integrate(pole, IntegrationSpec.of(("z", 0, 1), ("x", 0, 1)), u=u, u_args=("x", "z"), settings=settings)
        if abs(a.value - b.value) >= worst:
            worst, first, second = abs(a.value - b.value), a.value, b.value
    return first, second, {"cases": float(count)}


def _three_pole_structure() -> Tuple[float, float, Dict[str, float]]:
    centers = [AffineExpr.var(name) for name in ("z1", "z2", "z3")]
    recursive = canonicalize(reduce_product("x", [(c, 1) for c in centers]))
    closed = canonicalize(three_pole_closed_form("x", centers))
    difference = canonicalize(recursive - closed)
    return float(len(difference.terms)), 0.0, {"terms": float(len(recursive.terms))}


def _pole_cube(count: int, settings: Settings, tilted: bool = False) -> Tuple[float, float, Dict[str, float]]:
    names = [f"z{i + 1}" for i in range(count)]
    product = reduce_product("x", [(AffineExpr.var(name), 1) for name in names])
    spec = IntegrationSpec.of(("x", 0, 1), *((name, 0, 1) for name in names))
    u, u_args = None, None
    if tilted:
        # u = x + z1: against u = 1 an odd number of poles integrates to 0 by reflection
        u = PolynomialTestFn.from_mapping(count + 1, {(1,) + (0,) * count: 1, (0, 1) + (0,) * (count - 1): 1}, name="tilt")
        u_args = ("x", *names)
    result = repeated_integrate(product, spec, u=u, u_args=u_args, settings=settings)
    oracle = multiple_integral_regular([1] * count, u, settings=settings)
    return result.value, oracle.value, {"error_estimate": result.error, "oracle_error": oracle.error_estimate}


def _four_pole_closed_form_cube(settings: Settings) -> Tuple[float, float, Dict[str, float]]:
    centers = [AffineExpr.var(f"z{i + 1}") for i in range(4)]
    spec = IntegrationSpec.of(("x", 0, 1), *((f"z{i + 1}", 0, 1) for i in range(4)))
    closed = repeated_integrate(four_pole_closed_form("x", centers), spec, settings=settings)
    oracle = multiple_integral_regular([1] * 4, settings=settings)
    return closed.value, oracle.value, {"error_estimate": closed.error}


def _pair_general(n1: int, n2: int, count: int, settings: Settings) -> Tuple[float, float, Dict[str, float]]:
    rng = make_rng(settings.seed + 10 * n1 + n2)
    reduced = reduce_pair_general("x", AffineExpr.var("z1"), n1, AffineExpr.var("z2"), n2)
    spec = IntegrationSpec.of(("x", 0, 1), ("z1", 0, 1), ("z2", 0, 1))
    worst, first, second = -1.0, 0.0, 0.0
    for index in range(count):
        u = random_polynomial(rng, 3, degree=2, bump_power=max(n1, n2), name=f"u{index}")
        engine = repeated_integrate(reduced, spec, u=u, u_args=("x", "z1", "z2"), settings=settings)
        oracle = multiple_integral_regular([n1, n2], u, settings=settings)
        if abs(engine.value - oracle.value) > worst:
            worst, first, second = abs(engine.value - oracle.value), engine.value, oracle.value
    return first, second, {"cases": float(count)}


def _fast_path(n: int, settings: Settings) -> Tuple[float, float, Dict[str, float]]:
    one = PolynomialTestFn.constant(1, 1, name="one")
    worst, first, second = -1.0, 0.0, 0.0
    for y in np.linspace(0.05, 0.95, 10):
        if n == 1:
            closed = math.log(abs(1.0 - y)) - math.log(abs(y))
        else:
            closed = -((1.0 - y) ** (1 - n) - (-y) ** (1 - n)) / (n - 1)
        value = pv_quad(one, float(y), n, 0.0, 1.0, settings).value
        if abs(value - closed) > worst:
            worst, first, second = abs(value - closed), value, closed
    return first, second, {"positions": 10.0}


def _dilog_identity() -> Tuple[float, float, Dict[str, float]]:
    grid = np.logspace(-3, 3, 50)
    residual = np.abs(dilog_identity_residual(grid))
    return float(residual.max()), 0.0, {"points": 50.0}


def _simplex_routes(z: float) -> Tuple[float, float, Dict[str, float]]:
    return simplex_route_a(z), simplex_route_b(z), {}


def _simplex_symbolic_check(z: float, settings: Settings) -> Tuple[float, float, Dict[str, float]]:
    symbolic = simplex_symbolic(z, settings)
    return symbolic.value, simplex_route_b(z), {"error_estimate": symbolic.error}


def _simplex_oracle_check(z: float, settings: Settings) -> Tuple[float, float, Dict[str, float]]:
    return simplex_oracle(z, settings), simplex_route_b(z), {}


def _threshold_jump() -> Tuple[float, float, Dict[str, float]]:
    limits = simplex_one_sided_limits()
    return limits["jump"], -PI2, {"limit_plus": limits["plus"], "limit_minus": limits["minus"]}


def build_suite(
    settings: Settings,
    tolerance_scale: float = 1.0,
    include_slow: bool = False,
    property_cases: int = 20,
    include_long: bool = False,
) -> List[Tuple[str, Callable[[], List[ScenarioReport]]]]:
    """
    The acceptance checks as (group name, runner) pairs in report order.

    Args:
        settings (Settings): Numeric settings
        tolerance_scale (float): Multiplies every acceptance tolerance
        include_slow (bool): Add the higher-pole pair checks and the four-dimensional cube
        property_cases (int): Random test functions per order-independence check
        include_long (bool): Add the five-dimensional four-pole cubes, which run for
            well over ten minutes

    Returns:
        list: Named runners
    """
    s = tolerance_scale
    suite: List[Tuple[str, Callable[[], List[ScenarioReport]]]] = [
        ("cube", _guarded("cube", lambda: list(cube_c2_determination(settings, s)))),
        ("reduction.defining_property",
         _check("reduction.defining_property", 1e-7 * s, "pi^2/3", lambda: _reduction_defining_property(settings))),
    ]
    for n in (1, 2, 3):
        suite.append((
            f"order_independence.n{n}",
            _check(f"order_independence.n{n}", 1e-7 * s, "other order",
                   lambda n=n: _order_independence(n, property_cases, settings)),
        ))
    suite.append(("three_pole.structure", _check("three_pole.structure", 0.0, "closed form", _three_pole_structure)))
    for z in (0.25, 0.5, 1.0, 2.0, 5.0):
        name = f"simplex.routes.z={z:g}"
        suite.append((name, _check(name, 1e-10 * s, "route B", lambda z=z: _simplex_routes(z))))
    suite.append((
        "simplex.value_at_1",
        _check("simplex.value_at_1", 1e-10 * s, "-pi^2/3", lambda: (simplex_route_b(1.0), -PI2 / 3.0, {})),
    ))
    suite.append(("simplex.threshold_jump", _check("simplex.threshold_jump", 1e-9 * s, "-pi^2", _threshold_jump)))
    for z in (0.5, 1.0, 2.0):
        name = f"simplex.symbolic.z={z:g}"
        suite.append((name, _check(name, 1e-6 * s, "route B", lambda z=z: _simplex_symbolic_check(z, settings))))
        name = f"simplex.oracle.z={z:g}"
        suite.append((name, _check(name, 1e-6 * s, "route B", lambda z=z: _simplex_oracle_check(z, settings))))
    suite.extend([
        ("dilog.identity", _check("dilog.identity", 1e-10 * s, "0", _dilog_identity)),
        ("dilog.at_1", _check("dilog.at_1", 0.0, "0", lambda: (dilog(1.0), 0.0, {}))),
        ("dilog.at_2", _check("dilog.at_2", 1e-12 * s, "-pi^2/12", lambda: (dilog(2.0), -PI2 / 12.0, {}))),
    ])
    for n in (1, 2, 3):
        name = f"fast_path.n{n}"
        suite.append((name, _check(name, 1e-9 * s, "closed form", lambda n=n: _fast_path(n, settings))))

    if include_slow:
        for n1, n2 in ((2, 1), (1, 2), (2, 2)):
            name = f"pair_general.n{n1}_{n2}"
            suite.append((name, _check(name, 1e-5 * s, "oracle", lambda n1=n1, n2=n2: _pair_general(n1, n2, 5, settings))))
        suite.append((
            "three_pole.cube",
            _check("three_pole.cube", 1e-5 * s, "oracle", lambda: _pole_cube(3, settings, tilted=True)),
        ))
    if include_long:
        suite.append(("four_pole.cube", _check("four_pole.cube", 1e-4 * s, "oracle", lambda: _pole_cube(4, settings))))
        suite.append((
            "four_pole.closed_form_cube",
            _check("four_pole.closed_form_cube", 1e-4 * s, "oracle", lambda: _four_pole_closed_form_cube(settings)),
        ))
    return suite


def verify_suite(
    settings: Optional[Settings] = None,
    tolerance_scale: float = 1.0,
    include_slow: bool = False,
    only: Optional[Sequence[str]] = None,
    include_long: bool = False,
) -> List[ScenarioReport]:
    """
    Run the acceptance checks.

    Checks run on ``settings.max_workers`` threads; the reports always come
    back in suite order.

    Args:
        settings (Settings, optional): Numeric settings
        tolerance_scale (float): Multiplies every acceptance tolerance
        include_slow (bool): Add the expensive cube checks
        only (Sequence[str], optional): Run only groups whose name starts with one of these
        include_long (bool): Add the four-pole cubes

    Returns:
        list: One report per check
    """
    settings = settings or get_settings()
    suite = build_suite(settings, tolerance_scale, include_slow, include_long=include_long)
    if only:
        suite = [(name, run) for name, run in suite if any(name.startswith(prefix) for prefix in only)]
    logger.info(f"Running {len(suite)} verification groups on {settings.max_workers} worker(s)")

    if settings.max_workers > 1:
        with ThreadPoolExecutor(max_workers=settings.max_workers) as executor:
            batches = list(executor.map(lambda item: item[1](), suite))
    else:
        batches = [run() for _, run in suite]

    reports = [report for batch in batches for report in batch]
    failed = [report.name for report in reports if not report.passed]
    if failed:
        logger.warning(f"{len(failed)} of {len(reports)} checks failed: {', '.join(failed)}")
    else:
        logger.info(f"All {len(reports)} checks passed")
    return reports


def _format_number(value: float, digits: int) -> str:
    return f"{value:.{digits}g}"


def render_csv(reports: Sequence[ScenarioReport], digits: int = 15) -> str:
    """
    Reports as CSV with a fixed column order.

    Args:
        reports (Sequence[ScenarioReport]): The reports
        digits (int): Significant digits of every number

    Returns:
        str: CSV text with a header row
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for report in reports:
        writer.writerow([
            report.name,
            _format_number(report.computed, digits),
            _format_number(report.expected, digits),
            _format_number(report.abs_error, digits),
            "true" if report.passed else "false",
            _format_number(report.runtime_ms, 6),
        ])
    return buffer.getvalue()


def render_text(reports: Sequence[ScenarioReport]) -> str:
    """
    Reports as aligned text lines, followed by a summary naming the tightest margins.

    Args:
        reports (Sequence[ScenarioReport]): The reports

    Returns:
        str: The text
    """
    if not reports:
        return "no checks run\n"
    width = max(len(report.name) for report in reports)
    lines = []
    for report in reports:
        status = "PASS" if report.passed else "FAIL"
        line = (
            f"{status}  {report.name:<{width}}  computed={report.computed:.12g}  "
            f"expected={report.expected:.12g}  abs_error={report.abs_error:.3g}  "
            f"tol={report.tolerance:.1g}  {report.runtime_ms:.1f} ms"
        )
        if report.message:
            line += f"  ({report.message})"
        lines.append(line)

    passed = sum(report.passed for report in reports)
    lines.append(f"{passed}/{len(reports)} passed")
    tight = sorted((r for r in reports if r.tolerance > 0), key=lambda r: r.margin)[:3]
    if tight:
        lines.append("tightest margins: " + ", ".join(f"{r.name} ({r.margin:.2f})" for r in tight))
    return "\n".join(lines) + "\n"
