"""
API Endpoints for the VP calculus toolkit

This module defines the FastAPI endpoints. Handlers are plain functions, so
FastAPI runs the numeric work in its thread pool. Library errors propagate
to the error-handling middleware.
"""

from typing import Dict

from vp_calculus.api import app
from vp_calculus.api.models import (
    IntegrateRequest,
    IntegrateResponse,
    QuadRequest,
    QuadResponse,
    ReduceRequest,
    ReduceResponse,
    ScenarioReportModel,
    SimplexRequest,
    VerifyRequest,
    VerifyResponse,
)
from vp_calculus.config.settings import get_settings
from vp_calculus.core.errors import SpecError
from vp_calculus.core.expr.parser import parse_expr, parse_function_definition
from vp_calculus.core.expr.printer import format_expr
from vp_calculus.core.expr.testfn import TestFn, parse_polynomial
from vp_calculus.core.integrate.engine import parse_spec, repeated_integrate
from vp_calculus.core.oracle.quadrature import log_quad, multiple_integral_regular, pv_quad
from vp_calculus.core.oracle.special import dilog
from vp_calculus.core.reduction import canonicalize, reduce_in_variable
from vp_calculus.core.scenarios import ScenarioReport, simplex_I, verify_suite


def _report_model(report: ScenarioReport) -> ScenarioReportModel:
    return ScenarioReportModel(**report.to_dict())


def _polynomial(text: str, variables, name: str):
    try:
        return parse_polynomial(text, variables, name=name)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


@app.get("/")
def root():
    """Root endpoint to check if the API is running."""
    return {"message": "VP calculus API is running"}


@app.post("/api/reduce", response_model=ReduceResponse)
def reduce(request: ReduceRequest):
    """
    Reduce products of VP poles.

    With ``var`` only poles in that variable are combined; otherwise the
    canonical partial-fraction form is returned.
    """
    expr = parse_expr(request.expr)
    result = reduce_in_variable(expr, request.var) if request.var else canonicalize(expr)
    return ReduceResponse(input=format_expr(expr), result=format_expr(result), terms=len(result.terms))


@app.post("/api/integrate", response_model=IntegrateResponse)
def integrate(request: IntegrateRequest):
    """
    Integrate an expression over a spec and evaluate the result at the given parameters.
    """
    functions: Dict[str, TestFn] = {}
    for definition in request.functions:
        name, poly = parse_function_definition(definition)
        functions[name] = poly
    expr = parse_expr(request.expr, functions)
    spec = parse_spec(request.spec)
    result = repeated_integrate(expr, spec, params=request.params, form=request.form, settings=get_settings())
    return IntegrateResponse(value=result.value, error_estimate=result.error, expression=format_expr(result.expression))


@app.post("/api/quad", response_model=QuadResponse)
def quad(request: QuadRequest):
    """
    Run one oracle quadrature: ``pv``, ``log``, ``dilog`` or ``regular``.
    """
    settings = get_settings()
    if request.kind == "dilog":
        if request.z is None:
            raise SpecError("dilog needs z")
        return QuadResponse(value=dilog(request.z))

    if request.kind == "regular":
        if not request.degrees:
            raise SpecError("regular needs at least one pole degree")
        names = ["x"] + [f"z{i + 1}" for i in range(len(request.degrees))]
        weight = _polynomial(request.fn, names, "u") if request.fn else None
        result = multiple_integral_regular(request.degrees, weight, settings=settings)
    else:
        f = _polynomial(request.fn or "1", ["x"], "f")
        if request.kind == "pv":
            if request.pole is None:
                raise SpecError("pv needs a pole position")
            result = pv_quad(f, request.pole, request.degree, request.a, request.b, settings)
        else:
            if request.center is None:
                raise SpecError("log needs a center")
            result = log_quad(f, request.center, request.a, request.b, settings)
    return QuadResponse(value=result.value, error_estimate=result.error_estimate, evaluations=result.evaluations)


@app.post("/api/simplex", response_model=ScenarioReportModel)
def simplex(request: SimplexRequest):
    """
    Evaluate the simplex integral I(z) by the requested route.
    """
    report = simplex_I(request.z, request.route, request.one_sided, settings=get_settings())
    return _report_model(report)


@app.post("/api/verify", response_model=VerifyResponse)
def verify(request: VerifyRequest = VerifyRequest()):
    """
    Run the verification suite, or the checks selected by name prefix.
    """
    reports = verify_suite(
        get_settings(), request.tolerance_scale, include_slow=request.include_slow, only=request.only
    )
    failed = [report.name for report in reports if not report.passed]
    return VerifyResponse(
        passed=bool(reports) and not failed,
        total=len(reports),
        failed=failed,
        reports=[_report_model(report) for report in reports],
    )
