"""
Command-line interface for vp_calculus.

Commands:
    verify     run the acceptance suite, exit 0 iff every check passes
    reduce     print the reduced (partial-fraction) form of an expression
    integrate  integrate an expression over a spec and print the value
    quad       run a single oracle quadrature
    iz-scan    tabulate the simplex integral I(z) on a grid
    serve      start the HTTP API

Parse and spec errors exit with status 2, other failures with status 1.
"""

import argparse
import math
import re
import sys
from typing import Dict, List, Optional, Sequence, TextIO

import numpy as np

from vp_calculus.config.settings import Settings, get_api_settings, get_settings
from vp_calculus.core.errors import ParseError, SpecError, VPCalculusError
from vp_calculus.core.expr.parser import parse_expr, parse_function_definition
from vp_calculus.core.expr.printer import format_expr
from vp_calculus.core.expr.testfn import TestFn, parse_polynomial
from vp_calculus.core.integrate.engine import FORMS, evaluate_result, integrate_symbolic, parse_spec
from vp_calculus.core.oracle.quadrature import log_quad, multiple_integral_regular, pv_quad
from vp_calculus.core.oracle.special import dilog
from vp_calculus.core.reduction import canonicalize, reduce_in_variable
from vp_calculus.core.scenarios import (
    ROUTES,
    render_csv,
    render_text,
    simplex_oracle,
    simplex_route_a,
    simplex_route_b,
    verify_suite,
)
from vp_calculus.utils.logging import get_logger, set_level

logger = get_logger("vp_calculus.cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

_PARAM_RE = re.compile(r"^\s*(?P<name>[A-Za-z_]\w*)\s*=\s*(?P<value>\S+)\s*$")
SCAN_COLUMNS = ("z", "route_a", "route_b", "oracle", "abs_disagreement")
THRESHOLD_EPS = 1e-12


def parse_params(items: Sequence[str]) -> Dict[str, float]:
    """
    Parse ``name=value`` parameter assignments.

    Raises:
        SpecError: If an item is malformed or not a finite number
    """
    params = {}
    for item in items:
        match = _PARAM_RE.match(item)
        if not match:
            raise SpecError(f"Expected NAME=VALUE, got {item!r}")
        try:
            value = float(match.group("value"))
        except ValueError as exc:
            raise SpecError(f"Parameter {match.group('name')} is not a number: {match.group('value')!r}") from exc
        if not math.isfinite(value):
            raise SpecError(f"Parameter {match.group('name')} must be finite")
        params[match.group("name")] = value
    return params


def _finite(value: str) -> float:
    number = float(value)
    if not math.isfinite(number):
        raise argparse.ArgumentTypeError(f"{value} is not a finite number")
    return number


def _positive(value: str) -> float:
    number = _finite(value)
    if number <= 0:
        raise argparse.ArgumentTypeError(f"{value} must be positive")
    return number


def build_parser() -> argparse.ArgumentParser:
    """
    Build the argument parser.

    Returns:
        argparse.ArgumentParser: The parser
    """
    parser = argparse.ArgumentParser(prog="vp-calc", description="Principal-value distribution calculus toolkit")
    parser.add_argument("--tol", type=_positive, help="Oracle tolerance (default from settings, 1e-8)")
    parser.add_argument("--eps0", type=_positive, help="First excision radius of the principal-value oracle")
    parser.add_argument("--seed", type=int, help="Seed for random test functions")
    parser.add_argument("--format", choices=["csv", "text"], default="text", help="Output format")
    parser.add_argument(
        "--log-level",
        type=str,
        choices=["debug", "info", "warning", "error", "critical"],
        help="Logging level",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="Run the acceptance suite")
    verify.add_argument("--slow", action="store_true", help="Include the higher-pole pair checks and the three-pole cube")
    verify.add_argument("--long", action="store_true", help="Include the five-dimensional four-pole cubes (long-running)")
    verify.add_argument("--only", nargs="*", default=None, help="Run only checks whose names start with these")
    verify.add_argument("--tolerance-scale", type=_positive, default=1.0, help="Scale every acceptance tolerance")

    reduce_cmd = commands.add_parser("reduce", help="Reduce products of VP poles")
    reduce_cmd.add_argument("expr", help="Expression in the expression language")
    reduce_cmd.add_argument("--var", help="Reduce only poles in this variable")

    integrate = commands.add_parser("integrate", help="Integrate an expression over a spec")
    integrate.add_argument("expr", help="Expression in the expression language")
    integrate.add_argument("spec", help="Steps such as 'x=0..1, z=0..1', innermost first")
    integrate.add_argument("--param", action="append", default=[], help="Parameter value NAME=VALUE")
    integrate.add_argument("--fn", action="append", default=[], help="Test function NAME(ARGS)=POLYNOMIAL")
    integrate.add_argument("--form", choices=FORMS, default="auto", help="Form of single-pole results")
    integrate.add_argument("--symbolic", action="store_true", help="Print the symbolic result only")

    quad = commands.add_parser("quad", help="Run one oracle quadrature")
    kinds = quad.add_subparsers(dest="kind", required=True)
    pv = kinds.add_parser("pv", help="Principal value of f(x)/(x - pole)^n over [a, b]")
    pv.add_argument("--pole", type=_finite, required=True)
    pv.add_argument("--degree", type=int, default=1)
    pv.add_argument("--a", type=_finite, default=0.0)
    pv.add_argument("--b", type=_finite, default=1.0)
    pv.add_argument("--fn", default="1", help="Polynomial in x (default 1)")
    log = kinds.add_parser("log", help="Integral of ln|x - c| f(x) over [a, b]")
    log.add_argument("--center", type=_finite, required=True)
    log.add_argument("--a", type=_finite, default=0.0)
    log.add_argument("--b", type=_finite, default=1.0)
    log.add_argument("--fn", default="1", help="Polynomial in x (default 1)")
    dilog_cmd = kinds.add_parser("dilog", help="dilog(z) = int_1^z ln(t)/(1 - t) dt")
    dilog_cmd.add_argument("--z", type=_finite, required=True)
    regular = kinds.add_parser("regular", help="Regular-order integral of a product of poles")
    regular.add_argument("--degrees", type=int, nargs="+", required=True)
    regular.add_argument("--fn", help="Polynomial weight in x, z1, ..., zm (default 1)")

    scan = commands.add_parser("iz-scan", help="Tabulate the simplex integral I(z)")
    scan.add_argument("--min", dest="z_min", type=_finite, required=True)
    scan.add_argument("--max", dest="z_max", type=_finite, required=True)
    scan.add_argument("--steps", type=int, required=True)
    scan.add_argument("--route", choices=ROUTES, default="both")

    serve = commands.add_parser("serve", help="Start the HTTP API")
    serve.add_argument("--host", type=str, help="Host to bind the server to")
    serve.add_argument("--port", type=int, help="Port to bind the server to")
    serve.add_argument("--reload", action="store_true", help="Enable auto-reload on code changes")
    return parser


def settings_from_args(args: argparse.Namespace, base: Optional[Settings] = None) -> Settings:
    """
    Copy the settings with the global flags applied.

    Args:
        args (argparse.Namespace): Parsed arguments
        base (Settings, optional): Settings to start from

    Returns:
        Settings: Updated settings
    """
    base = base or get_settings()
    update = {}
    if args.tol is not None:
        update["oracle_tol"] = args.tol
    if args.eps0 is not None:
        update["excision_eps0"] = args.eps0
    if args.seed is not None:
        update["seed"] = args.seed
    return base.model_copy(update=update) if update else base


def _number(value: Optional[float], digits: int) -> str:
    return "" if value is None else f"{value:.{digits}g}"


def run_verify(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    reports = verify_suite(
        settings, args.tolerance_scale, include_slow=args.slow, only=args.only, include_long=args.long
    )
    if args.format == "csv":
        out.write(render_csv(reports, settings.csv_digits))
    else:
        out.write(render_text(reports))
    return EXIT_OK if reports and all(report.passed for report in reports) else EXIT_FAILED


def run_reduce(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    expr = parse_expr(args.expr)
    reduced = reduce_in_variable(expr, args.var) if args.var else canonicalize(expr)
    out.write(format_expr(reduced) + "\n")
    return EXIT_OK


def run_integrate(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    functions: Dict[str, TestFn] = {}
    for definition in args.fn:
        name, poly = parse_function_definition(definition)
        functions[name] = poly
    expr = parse_expr(args.expr, functions)
    spec = parse_spec(args.spec)
    params = parse_params(args.param)
    result = integrate_symbolic(expr, spec, form=args.form)
    if args.symbolic:
        out.write(format_expr(result) + "\n")
        return EXIT_OK

    unbound = set(result.free_vars) - set(params)
    if unbound:
        raise SpecError(f"Unbound variables: {', '.join(sorted(unbound))}")
    value, error = evaluate_result(result, params, settings)
    digits = settings.csv_digits
    if args.format == "csv":
        out.write("value,error_estimate\n")
        out.write(f"{value:.{digits}g},{error:.{digits}g}\n")
    else:
        out.write(f"value = {value:.{digits}g}\nerror_estimate = {error:.3g}\n")
    return EXIT_OK


def run_quad(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    error: Optional[float] = None
    evaluations: Optional[int] = None
    if args.kind == "dilog":
        value = dilog(args.z)
    elif args.kind == "regular":
        names = ["x"] + [f"z{i + 1}" for i in range(len(args.degrees))]
        weight = None
        if args.fn:
            try:
                weight = parse_polynomial(args.fn, names)
            except ValueError as exc:
                raise SpecError(str(exc)) from exc
        result = multiple_integral_regular(args.degrees, weight, settings=settings)
        value, error, evaluations = result.value, result.error_estimate, result.evaluations
    else:
        try:
            f = parse_polynomial(args.fn, ["x"], name="f")
        except ValueError as exc:
            raise SpecError(str(exc)) from exc
        if args.kind == "pv":
            result = pv_quad(f, args.pole, args.degree, args.a, args.b, settings)
        else:
            result = log_quad(f, args.center, args.a, args.b, settings)
        value, error, evaluations = result.value, result.error_estimate, result.evaluations

    digits = settings.csv_digits
    if args.format == "csv":
        out.write("value,error_estimate,evaluations\n")
        out.write(f"{value:.{digits}g},{_number(error, digits)},{'' if evaluations is None else evaluations}\n")
    else:
        out.write(f"value = {value:.{digits}g}\n")
        if error is not None:
            out.write(f"error_estimate = {error:.3g}\nevaluations = {evaluations}\n")
    return EXIT_OK


def scan_rows(z_min: float, z_max: float, steps: int, route: str, settings: Settings) -> List[Dict[str, Optional[float]]]:
    """
    Values of I(z) on an even grid. Points at the threshold are returned
    with every value missing; points where no route holds are dropped.

    Returns:
        list: One dict per grid point with the SCAN_COLUMNS keys
    """
    if steps < 1:
        raise SpecError(f"steps must be at least 1, got {steps}")
    grid = np.linspace(z_min, z_max, steps) if steps > 1 else np.array([z_min])
    rows = []
    for z in (float(v) for v in grid):
        row: Dict[str, Optional[float]] = {column: None for column in SCAN_COLUMNS}
        row["z"] = z
        if abs(z) < THRESHOLD_EPS:
            rows.append(row)
            continue
        if z <= -1:
            logger.warning(f"Skipping z={z}: no route holds at or below z=-1")
            continue
        if route in ("A", "both") and z > 0:
            row["route_a"] = simplex_route_a(z)
        if route in ("B", "both"):
            row["route_b"] = simplex_route_b(z)
        row["oracle"] = simplex_oracle(z, settings)
        values = [row[key] for key in ("route_a", "route_b", "oracle") if row[key] is not None]
        row["abs_disagreement"] = max(values) - min(values)
        rows.append(row)
    return rows


def run_scan(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    rows = scan_rows(args.z_min, args.z_max, args.steps, args.route, settings)
    digits = settings.csv_digits
    if args.format == "csv":
        out.write(",".join(SCAN_COLUMNS) + "\n")
    for row in rows:
        if row["route_b"] is None and row["route_a"] is None and row["oracle"] is None:
            out.write(f"# z={row['z']:.{digits}g} skipped: I(z) is undefined at the threshold\n")
            continue
        if args.format == "csv":
            out.write(",".join(_number(row[column], digits) for column in SCAN_COLUMNS) + "\n")
        else:
            out.write("  ".join(f"{column}={_number(row[column], digits) or '-'}" for column in SCAN_COLUMNS) + "\n")
    return EXIT_OK


def run_serve(args: argparse.Namespace, settings: Settings, out: TextIO) -> int:
    import uvicorn

    api_settings = get_api_settings()
    host = args.host or api_settings["host"]
    port = args.port or api_settings["port"]
    out.write(f"Starting VP calculus API server on http://{host}:{port}\n")
    uvicorn.run("vp_calculus.main:app", host=host, port=port, reload=args.reload, log_level=settings.log_level.lower())
    return EXIT_OK


COMMANDS = {
    "verify": run_verify,
    "reduce": run_reduce,
    "integrate": run_integrate,
    "quad": run_quad,
    "iz-scan": run_scan,
    "serve": run_serve,
}


def run(args: argparse.Namespace, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    """
    Execute a parsed command.

    Args:
        args (argparse.Namespace): Parsed arguments
        out (TextIO, optional): Destination of results, stdout by default
        err (TextIO, optional): Destination of error messages, stderr by default

    Returns:
        int: Exit status
    """
    out = out or sys.stdout
    err = err or sys.stderr
    if args.log_level:
        set_level(args.log_level)
    try:
        settings = settings_from_args(args)
        logger.info(f"Running {args.command}")
        return COMMANDS[args.command](args, settings, out)
    except (ParseError, SpecError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except VPCalculusError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_FAILED
    except (ArithmeticError, ValueError) as exc:
        logger.exception(f"{args.command} failed")
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_FAILED


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point of ``vp-calc``.

    Args:
        argv (Sequence[str], optional): Arguments without the program name

    Returns:
        int: Exit status
    """
    args = build_parser().parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
