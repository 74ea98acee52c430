"""
Test script for the expression parser and printer.
"""

from fractions import Fraction

import pytest

from vp_calculus.core.algebra.coeff import PiCoeff
from vp_calculus.core.errors import ParseError, SpecError
from vp_calculus.core.expr.affine import AffineExpr
from vp_calculus.core.expr.expr import DeferredIntegral, DistExpr, DistTerm, normalize
from vp_calculus.core.expr.factors import DeltaDeriv, HeavisideGuard, LogAbs, Smooth, VPPole
from vp_calculus.core.expr.parser import parse_affine, parse_expr, parse_function_definition
from vp_calculus.core.expr.printer import format_expr
from vp_calculus.utils.sampling import random_factor

x, y = AffineExpr.var("x"), AffineExpr.var("y")


def _random_symbolic_expr(rng, max_terms=3, max_factors=3):
    terms = []
    for _ in range(int(rng.integers(1, max_terms + 1))):
        count = int(rng.integers(0, max_factors + 1))
        factors = []
        while len(factors) < count:
            factor = random_factor(rng)
            if not isinstance(factor, Smooth):
                factors.append(factor)
        coeff = PiCoeff.from_mapping({0: int(rng.integers(-3, 4)), 1: Fraction(int(rng.integers(-2, 3)), 3)})
        terms.append(DistTerm(coeff if not coeff.is_zero() else PiCoeff.one(), tuple(factors)))
    return normalize(DistExpr(tuple(terms)))


def test_parse_factors():
    """Test that each factor kind parses to the expected AST."""
    assert parse_expr("VP[1/(x - y)]") == DistExpr.product(VPPole(x - y))
    assert parse_expr("VP[1/(x-1/2)^3]") == DistExpr.product(VPPole(x - Fraction(1, 2), 3))
    assert parse_expr("log|x + 1|") == DistExpr.product(LogAbs(x + 1))
    assert parse_expr("log^(2)|x|") == DistExpr.product(LogAbs(x, 2))
    assert parse_expr("delta^(1)(x - y)") == DistExpr.product(DeltaDeriv(x - y, 1))
    assert parse_expr("theta(y - x)") == DistExpr.product(HeavisideGuard(y - x))


def test_parse_coefficients():
    """Test rational and pi^2 coefficients."""
    expr = parse_expr("-2/3*pi^2*VP[1/(x)]")
    assert expr == DistExpr.product(VPPole(x), coeff=PiCoeff.pi2(Fraction(-2, 3)))
    grouped = parse_expr("(1 - pi^2)*delta(x)")
    assert grouped.terms[0].coeff == PiCoeff.from_mapping({0: 1, 1: -1})
    assert parse_expr("2 + 3") == DistExpr.constant(5)


def test_parse_affine_terms():
    """Test scaled variables and divisions in affine arguments."""
    assert parse_affine("eta + xi/2 - 1") == AffineExpr.build(-1, {"eta": 1, "xi": Fraction(1, 2)})
    assert parse_affine("-3/4*x + 2") == AffineExpr.build(2, {"x": Fraction(-3, 4)})


def test_parse_smooth_with_functions():
    """Test that bound test functions are used and unknown names become placeholders."""
    name, u = parse_function_definition("u(x, z) = 1 + x*z^2")
    assert name == "u"
    assert u.arity == 2
    assert u(2.0, 3.0) == pytest.approx(19.0)

    expr = parse_expr("u(x, y)*VP[1/(x - y)]", {"u": u})
    smooth = [f for f in expr.terms[0].factors if isinstance(f, Smooth)][0]
    assert smooth.fn == u

    placeholder = parse_expr("g^(1,0)(x, y)")
    smooth = placeholder.terms[0].factors[0]
    assert smooth.fn.name == "g"
    assert smooth.orders == (1, 0)


def test_parse_deferred_integral():
    """Test the int[...] form of a deferred integral."""
    expr = parse_expr("int[x=0..1](log|x - y|)")
    factor = expr.terms[0].factors[0]
    assert isinstance(factor, DeferredIntegral)
    assert factor.var == "x"
    assert factor.variables() == frozenset({"y"})


def test_error_position_at_end_of_input():
    """Test that an unterminated pole reports the column of the end of input."""
    with pytest.raises(ParseError) as excinfo:
        parse_expr("VP[1/(x-")
    assert excinfo.value.line == 1
    assert excinfo.value.column == 8
    assert "variable" in excinfo.value.expected


def test_error_positions():
    """Test line and column of several syntax errors."""
    with pytest.raises(ParseError) as excinfo:
        parse_expr("VP[2/(x)]")
    assert excinfo.value.column == 3

    with pytest.raises(ParseError) as excinfo:
        parse_expr("x $ y")
    assert excinfo.value.column == 2

    with pytest.raises(ParseError) as excinfo:
        parse_expr("VP[1/(x)]\n + ?")
    assert (excinfo.value.line, excinfo.value.column) == (2, 3)

    with pytest.raises(ParseError) as excinfo:
        parse_expr("pi^3")
    assert excinfo.value.column == 3


def test_error_cases():
    """Test empty input, reserved names and trailing input."""
    with pytest.raises(ParseError):
        parse_expr("   ")
    with pytest.raises(ParseError):
        parse_expr("VP[1/(log)]")
    with pytest.raises(ParseError):
        parse_expr("delta(x) delta(y)")
    with pytest.raises(ParseError):
        parse_expr("VP[1/(x)^0]")


def test_function_definition_errors():
    """Test malformed test-function definitions."""
    with pytest.raises(SpecError):
        parse_function_definition("u = x")
    with pytest.raises(SpecError):
        parse_function_definition("VP(x) = 1")
    with pytest.raises(SpecError):
        parse_function_definition("u(x) = 1 + w")


def test_printer_examples():
    """Test the printed form of a few expressions."""
    assert format_expr(DistExpr.zero()) == "0"
    assert format_expr(parse_expr("2*VP[1/(x - 1/2)]")) == "2*VP[1/(x - 1/2)]"
    assert format_expr(parse_expr("-pi^2*delta(x)")) == "-pi^2*delta(x)"
    assert format_expr(parse_expr("VP[1/(x)^2]")) == "VP[1/(x)^2]"


def test_print_parse_round_trip(rng):
    """Test that parsing the printed form of a normalized expression gives it back."""
    for _ in range(1000):
        expr = _random_symbolic_expr(rng)
        text = format_expr(expr)
        assert parse_expr(text) == expr, text
