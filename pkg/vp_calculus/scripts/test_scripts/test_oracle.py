"""
Test script for the quadrature oracle and the dilogarithm.
"""

import math

import mpmath
import numpy as np
import pytest

from vp_calculus.core.errors import DomainError, PoleOutsideInterval
from vp_calculus.core.expr.testfn import PolynomialTestFn
from vp_calculus.core.oracle import (
    difference_quotient_integral,
    dilog,
    dilog_identity_residual,
    log_quad,
    multiple_integral_regular,
    neville,
    pv_quad,
)

ONE = PolynomialTestFn.constant(1, 1, name="one")
IDENTITY = PolynomialTestFn.coordinate(0, 1, name="id")


def test_neville_extrapolates_linear_data():
    """Test that Neville's scheme removes a linear error term exactly."""
    steps = [0.1, 0.05, 0.025]
    diagonal = neville(steps, [2.0 + 3.0 * h for h in steps])
    assert diagonal[0] == pytest.approx(2.3)
    assert diagonal[-1] == pytest.approx(2.0, abs=1e-12)


def test_pv_simple_pole_examples(settings):
    """Test principal values of simple poles against closed forms."""
    assert pv_quad(ONE, 0.5, 1, 0.0, 1.0, settings).value == pytest.approx(0.0, abs=1e-9)
    for y in (0.2, 0.5, 0.7):
        expected = 1.0 + y * math.log((1.0 - y) / y)
        assert pv_quad(IDENTITY, y, 1, 0.0, 1.0, settings).value == pytest.approx(expected, abs=1e-9)


def test_pv_with_callable(settings):
    """Test that plain callables are accepted."""
    value = pv_quad(math.exp, 0.5, 1, 0.0, 1.0, settings).value
    expected = math.exp(0.5) * (float(mpmath.ei(0.5)) - float(mpmath.ei(-0.5)))
    assert value == pytest.approx(expected, abs=1e-8)


def test_pv_higher_poles(settings):
    """Test Hadamard finite parts of double and triple poles."""
    assert pv_quad(ONE, 0.5, 2, 0.0, 1.0, settings).value == pytest.approx(-4.0, abs=1e-9)
    y = 0.3
    expected = -((1.0 - y) ** -2 - y**-2) / 2.0
    assert pv_quad(ONE, y, 3, 0.0, 1.0, settings).value == pytest.approx(expected, abs=1e-9)


def test_pv_reflection_is_odd(settings):
    """Test that PV int 1/(x - y) over [0, 1] is odd under y -> 1 - y."""
    for y in (0.1, 0.35, 0.45):
        left = pv_quad(ONE, y, 1, 0.0, 1.0, settings).value
        right = pv_quad(ONE, 1.0 - y, 1, 0.0, 1.0, settings).value
        assert left + right == pytest.approx(0.0, abs=1e-9)


def test_pv_pole_outside_interval(settings):
    """Test that the pole must lie strictly inside the interval."""
    with pytest.raises(PoleOutsideInterval):
        pv_quad(ONE, 0.0, 1, 0.0, 1.0, settings)
    with pytest.raises(PoleOutsideInterval):
        pv_quad(ONE, 1.5, 1, 0.0, 1.0, settings)
    with pytest.raises(ValueError):
        pv_quad(ONE, 0.5, 0, 0.0, 1.0, settings)


def test_log_quad_examples(settings):
    """Test log-weighted integrals with the center at an end, inside and outside."""
    assert log_quad(ONE, 0.0, 0.0, 1.0, settings).value == pytest.approx(-1.0, abs=1e-10)
    assert log_quad(ONE, 0.5, 0.0, 1.0, settings).value == pytest.approx(-1.0 - math.log(2.0), abs=1e-10)
    assert log_quad(IDENTITY, 0.0, 0.0, 1.0, settings).value == pytest.approx(-0.25, abs=1e-10)
    assert log_quad(ONE, 2.0, 0.0, 1.0, settings).value == pytest.approx(2.0 * math.log(2.0) - 1.0, abs=1e-10)


def test_regular_order_cube(settings):
    """Test the two-pole regular-order integral over the unit cube."""
    result = multiple_integral_regular([1, 1], settings=settings)
    assert result.value == pytest.approx(math.pi**2 / 3.0, abs=1e-6)


def test_regular_order_single_pole(settings):
    """Test int_0^1 int_0^1 VP 1/(x - z) dz dx, which vanishes by antisymmetry."""
    assert multiple_integral_regular([1], settings=settings).value == pytest.approx(0.0, abs=1e-8)


def test_regular_order_argument_checks(settings):
    """Test the arity and bound checks of multiple_integral_regular."""
    with pytest.raises(ValueError):
        multiple_integral_regular([], settings=settings)
    with pytest.raises(ValueError):
        multiple_integral_regular([1], PolynomialTestFn.constant(1, 3), settings=settings)
    with pytest.raises(ValueError):
        multiple_integral_regular([1], cube=[(0.0, 1.0)], settings=settings)


def test_difference_quotient_integral(settings):
    """Test the double integral of a difference quotient with a smooth function."""
    result = difference_quotient_integral(lambda s: s * s, lambda s: 2.0 * s, 0.0, 1.0, settings)
    assert result.value == pytest.approx(1.0, abs=1e-9)


def test_difference_quotient_integral_stays_inside(settings):
    """Test the log bracket ln(1 - s) - ln(s), which is undefined at both ends."""
    def bracket(s):
        assert 0.0 < s < 1.0, s
        return math.log(1.0 - s) - math.log(s)

    def bracket_prime(s):
        assert 0.0 < s < 1.0, s
        return -1.0 / (1.0 - s) - 1.0 / s

    result = difference_quotient_integral(bracket, bracket_prime, 0.0, 1.0, settings)
    assert result.value == pytest.approx(-2.0 * math.pi**2 / 3.0, abs=1e-6)


def test_dilog_special_values():
    """Test dilog(1) = 0 and dilog(2) = -pi^2/12."""
    assert dilog(1.0) == 0.0
    assert dilog(2.0) == pytest.approx(-math.pi**2 / 12.0, abs=1e-14)
    assert dilog(0.5) == pytest.approx(math.pi**2 / 12.0 - math.log(2.0) ** 2 / 2.0, abs=1e-14)


def test_dilog_matches_mpmath():
    """Test dilog(z) = Li2(1 - z) against mpmath."""
    for z in (0.01, 0.3, 1.5, 3.0, 40.0):
        assert dilog(z) == pytest.approx(float(mpmath.polylog(2, 1 - z)), abs=1e-12)


def test_dilog_arrays():
    """Test that arrays keep their shape."""
    values = dilog(np.array([[1.0, 2.0], [0.5, 4.0]]))
    assert values.shape == (2, 2)
    assert values[0, 0] == 0.0


def test_dilog_domain():
    """Test that non-positive and non-finite arguments raise DomainError."""
    for bad in (0.0, -1.0, float("nan"), float("inf")):
        with pytest.raises(DomainError):
            dilog(bad)
    with pytest.raises(DomainError):
        dilog(np.array([1.0, -0.5]))


def test_dilog_reflection_identity():
    """Test the identity that ties the two closed forms of the simplex integral."""
    grid = np.logspace(-3, 3, 60)
    assert np.max(np.abs(dilog_identity_residual(grid))) < 1e-10
    with pytest.raises(DomainError):
        dilog_identity_residual(-1.0)
