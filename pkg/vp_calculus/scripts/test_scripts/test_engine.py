"""
Test script for the integration engine and its numeric rules.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from vp_calculus.core.errors import (
    DeltaNotEvaluable,
    NotSeparable,
    PoleAtEndpoint,
    SingularEvaluation,
    SpecError,
    ThresholdUndefined,
)
from vp_calculus.core.expr.affine import AffineExpr
from vp_calculus.core.expr.expr import DistExpr
from vp_calculus.core.expr.factors import LogAbs, Smooth, VPPole
from vp_calculus.core.expr.parser import parse_expr, parse_function_definition
from vp_calculus.core.expr.printer import format_expr
from vp_calculus.core.integrate.engine import (
    IntegrationSpec,
    evaluate_result,
    integrate_separable,
    integrate_symbolic,
    integrate_vp_term,
    parse_spec,
    repeated_integrate,
)
from vp_calculus.core.integrate.numeric import tanh_sinh
from vp_calculus.core.oracle import log_quad, pv_quad
from vp_calculus.core.reduction import reduce_product
from vp_calculus.utils.sampling import make_rng, random_polynomial


def _integrate(text, spec, functions=None, **params):
    return repeated_integrate(parse_expr(text, functions), parse_spec(spec), params=params)


def test_parse_spec():
    """Test the var=lower..upper step syntax."""
    spec = parse_spec("eta=-xi/2..xi/2, xi=0..2+z")
    assert spec.variables == ("eta", "xi")
    assert spec.steps[0].lower == AffineExpr.build(0, {"xi": Fraction(-1, 2)})
    assert str(spec) == "eta=-1/2*xi..1/2*xi, xi=0..z + 2"


def test_parse_spec_errors():
    """Test malformed and inconsistent specs."""
    with pytest.raises(SpecError):
        parse_spec("x 0 1")
    with pytest.raises(SpecError):
        parse_spec("")
    with pytest.raises(SpecError):
        parse_spec("x=0..1, x=0..2")
    with pytest.raises(SpecError):
        parse_spec("z=0..1, x=0..z")
    with pytest.raises(SpecError):
        parse_spec("x=0..(")


def test_single_pole():
    """Test PV int_0^1 dx / (x - y) = ln((1 - y) / y)."""
    result = _integrate("VP[1/(x-y)]", "x=0..1", y=0.3)
    assert result.value == pytest.approx(math.log(0.7 / 0.3), abs=1e-12)
    assert "log|" in format_expr(result.expression)


def test_single_pole_with_weight():
    """Test PV int_0^1 x dx / (x - y) = 1 + y ln((1 - y) / y)."""
    name, u = parse_function_definition("u(x) = x")
    result = _integrate("VP[1/(x-y)]*u(x)", "x=0..1", {name: u}, y=0.3)
    assert result.value == pytest.approx(1.0 + 0.3 * math.log(0.7 / 0.3), abs=1e-8)


@pytest.mark.parametrize("z", [0.5, 1.0, 3.0])
def test_pole_with_unit_distance_to_a_limit(z):
    """Test PV int_0^(2+z) dx / (x - 1) = ln(1 + z), where ln|0 - 1| drops out."""
    result = _integrate("VP[1/(x-1)]", "x=0..2+z", z=z)
    assert result.value == pytest.approx(math.log(1.0 + z), abs=1e-12)


def test_pole_outside_interval():
    """Test int_0^1 dx / (x - 2) = ln(1/2)."""
    assert _integrate("VP[1/(x-2)]", "x=0..1").value == pytest.approx(math.log(0.5), abs=1e-12)


def test_log_of_unit_constant_is_zero():
    """Test that ln|1| and ln|-1| normalize to zero."""
    assert parse_expr("log|1|").is_zero()
    assert parse_expr("log|-1|*VP[1/(x-y)]").is_zero()
    assert not parse_expr("log|2|").is_zero()


@pytest.mark.parametrize("form", ["explicit", "derivative"])
def test_double_pole_forms(form):
    """Test the finite part of int_0^1 dx / (x - y)^2 in both result forms."""
    expr = parse_expr("VP[1/(x-y)^2]")
    result = repeated_integrate(expr, parse_spec("x=0..1"), params={"y": 0.3}, form=form)
    assert result.value == pytest.approx(-1.0 / 0.7 - 1.0 / 0.3, rel=1e-12)


def test_constant_integrand():
    """Test that a term free of the variable is multiplied by the interval length."""
    assert _integrate("1", "x=0..2").value == pytest.approx(2.0)
    assert _integrate("3", "x=0..y", y=1.5).value == pytest.approx(4.5)


def test_delta_inside_and_outside():
    """Test that delta integration is guarded by the interval."""
    assert _integrate("delta(x-y)", "x=0..1", y=0.4).value == pytest.approx(1.0)
    assert _integrate("delta(x-y)", "x=0..1", y=1.4).value == 0.0


def test_delta_derivative():
    """Test int delta'(x - y) f(x) dx = -f'(y)."""
    name, f = parse_function_definition("f(x) = x^3")
    result = _integrate("delta^(1)(x-y)*f(x)", "x=0..1", {name: f}, y=0.5)
    assert result.value == pytest.approx(-0.75)


def test_repeated_delta():
    """Test int_0^1 int_0^1 delta(x - z) dx dz = 1."""
    assert _integrate("delta(x-z)", "x=0..1, z=0..1").value == pytest.approx(1.0)


def test_guard_at_jump():
    """Test that evaluating a guard at its jump raises ThresholdUndefined."""
    with pytest.raises(ThresholdUndefined):
        _integrate("delta(x-y)", "x=0..1", y=0.0)


def test_remaining_delta_is_not_evaluable():
    """Test that a delta in the parameters cannot be evaluated."""
    with pytest.raises(DeltaNotEvaluable):
        _integrate("delta(x-y)*delta(y-w)", "x=0..1", y=0.5, w=0.5)


def test_pole_at_endpoint_is_tagged_with_step():
    """Test the step index on PoleAtEndpoint."""
    with pytest.raises(PoleAtEndpoint) as excinfo:
        _integrate("VP[1/(x)]", "x=0..1")
    assert excinfo.value.step == 0

    with pytest.raises(PoleAtEndpoint) as excinfo:
        _integrate("VP[1/(z)]", "x=0..1, z=0..1")
    assert excinfo.value.step == 1
    assert "integration step 1" in str(excinfo.value)


def test_unbound_variables():
    """Test that free variables must be integrated or bound."""
    with pytest.raises(SpecError):
        _integrate("VP[1/(x-y)]", "x=0..1")


def test_symbolic_result_can_be_reevaluated():
    """Test evaluate_result on a symbolic integral at several parameter values."""
    expression = integrate_symbolic(parse_expr("VP[1/(x-y)]"), parse_spec("x=0..1"))
    for y in (0.2, 0.5, 0.8):
        value, error = evaluate_result(expression, {"y": y})
        assert value == pytest.approx(math.log((1.0 - y) / y), abs=1e-12)
        assert error == 0.0


def test_tanh_sinh_endpoint_singularity():
    """Test tanh-sinh on integrands with log singularities at the ends."""
    assert tanh_sinh(np.log, 0.0, 1.0, 0.1).value == pytest.approx(-1.0, abs=1e-10)
    assert tanh_sinh(lambda t: t**2, 0.0, 1.0, 0.1).value == pytest.approx(1.0 / 3.0, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_order_independence(n, settings):
    """Test that x-then-z and z-then-x agree for VP 1/(x - z)^n against 20 random weights."""
    rng = make_rng(settings.seed + n)
    x, z = AffineExpr.var("x"), AffineExpr.var("z")
    pole = DistExpr.product(VPPole(x - z, n))
    for index in range(20):
        u = random_polynomial(rng, 2, degree=4, bump_power=n, name=f"u{index}")
        first = repeated_integrate(pole, IntegrationSpec.of(("x", 0, 1), ("z", 0, 1)), u=u, u_args=("x", "z"),
                                   settings=settings)
        second = repeated_integrate(pole, IntegrationSpec.of(("z", 0, 1), ("x", 0, 1)), u=u, u_args=("x", "z"),
                                    settings=settings)
        assert first.value == pytest.approx(second.value, abs=1e-7)


@pytest.mark.slow
def test_reduced_pair_over_unit_cube(settings):
    """Test that the reduced two-pole product integrates to pi^2/3 over the unit cube."""
    reduced = reduce_product("x", [(AffineExpr.var("z1"), 1), (AffineExpr.var("z2"), 1)])
    result = repeated_integrate(reduced, parse_spec("x=0..1, z1=0..1, z2=0..1"), settings=settings)
    assert result.value == pytest.approx(math.pi**2 / 3.0, abs=1e-7)


def test_pole_times_delta_with_same_center():
    """Test that VP 1/(x - z) delta(x - z) is kept as is and refused on integration."""
    expr = parse_expr("VP[1/(x-z)]*delta(x-z)")
    assert len(expr.terms) == 1
    assert len(expr.terms[0].factors) == 2
    with pytest.raises(SingularEvaluation):
        integrate_symbolic(expr, parse_spec("x=0..1"))


SEPARABLE_FUNCTIONS = dict(
    parse_function_definition(text) for text in ("u(x) = 1 + 2*x - x^3", "p(y) = 1 + y^2")
)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_separable_matches_integration_by_parts(n):
    """Test the separable route against the by-parts route and the quadrature oracle."""
    u, p = SEPARABLE_FUNCTIONS["u"], SEPARABLE_FUNCTIONS["p"]
    term = parse_expr(f"VP[1/(x-y)^{n}]*u(x)*p(y)", SEPARABLE_FUNCTIONS).terms[0]
    zero, one = AffineExpr.const(0), AffineExpr.const(1)
    separable = integrate_separable(term, "x", zero, one, "y")
    by_parts = integrate_vp_term(term, "x", zero, one)
    for y in (0.2, 0.45, 0.8):
        value, _ = evaluate_result(separable, {"y": y})
        reference, _ = evaluate_result(by_parts, {"y": y})
        assert value == pytest.approx(reference, abs=1e-8)
        assert value == pytest.approx(pv_quad(u, y, n, 0.0, 1.0).value * p(y), abs=1e-7)


def test_separable_rejects_coupled_terms():
    """Test the cases the separable route refuses."""
    name, coupled = parse_function_definition("v(x, y) = x*y")
    functions = dict(SEPARABLE_FUNCTIONS, **{name: coupled})
    zero, one = AffineExpr.const(0), AffineExpr.const(1)

    with pytest.raises(NotSeparable):
        integrate_separable(parse_expr("VP[1/(x-y)]*v(x, y)", functions).terms[0], "x", zero, one, "y")
    with pytest.raises(NotSeparable):
        integrate_separable(parse_expr("VP[1/(x-y)]*u(x)", functions).terms[0], "x", zero, AffineExpr.var("w"), "y")
    with pytest.raises(NotSeparable):
        integrate_separable(parse_expr("VP[1/(x-2*y)]*u(x)", functions).terms[0], "x", zero, one, "y")


def test_integration_is_linear(rng):
    """Test that integrating 3 e1 - 2 e2 + e3 gives the same combination of the integrals."""
    x, y = AffineExpr.var("x"), AffineExpr.var("y")
    weights = [Smooth(random_polynomial(rng, 1, degree=3, name=name), (x,)) for name in ("a", "b", "c")]
    parts = [
        DistExpr.product(VPPole(x - y), weights[0]),
        DistExpr.product(VPPole(x - y, 2), weights[1]),
        DistExpr.product(LogAbs(x - y), weights[2]),
    ]
    combined = parts[0].scale(3) - parts[1].scale(2) + parts[2]
    spec = parse_spec("x=0..1")
    for y_value in (0.3, 0.65):
        values = [repeated_integrate(part, spec, params={"y": y_value}).value for part in parts]
        total = repeated_integrate(combined, spec, params={"y": y_value}).value
        assert total == pytest.approx(3 * values[0] - 2 * values[1] + values[2], abs=1e-10)


@pytest.mark.parametrize(
    "guard, y, z, lower, upper",
    [("theta(z-x)", 0.3, 0.6, 0.0, 0.6), ("theta(x-z)", 0.7, 0.4, 0.4, 1.0)],
)
def test_guard_clips_the_interval(guard, y, z, lower, upper):
    """Test a guarded pole and a guarded log against quadrature on the clipped interval."""
    name, u = parse_function_definition("u(x) = 2 + x - 3*x^2")
    functions = {name: u}

    result = _integrate(f"{guard}*VP[1/(x-y)]*u(x)", "x=0..1", functions, y=y, z=z)
    assert result.value == pytest.approx(pv_quad(u, y, 1, lower, upper).value, abs=1e-8)

    result = _integrate(f"{guard}*log|x-y|*u(x)", "x=0..1", functions, y=y, z=z)
    assert result.value == pytest.approx(log_quad(u, y, lower, upper).value, abs=1e-8)
