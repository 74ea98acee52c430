"""
Test script for exact coefficient arithmetic in Q[pi^2].
"""

import math
from fractions import Fraction

import pytest

from vp_calculus.core.algebra.coeff import PiCoeff, coeff_add, coeff_mul, coeff_to_float, format_coeff, parse_coeff
from vp_calculus.utils.sampling import random_coeff

CASES = 1000


def test_ring_axioms(rng):
    """Test commutativity, associativity and distributivity on random coefficients."""
    for _ in range(CASES):
        a, b, c = (random_coeff(rng, 2) for _ in range(3))
        assert coeff_add(a, b) == coeff_add(b, a)
        assert coeff_mul(a, b) == coeff_mul(b, a)
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + PiCoeff.zero() == a
        assert a * PiCoeff.one() == a
        assert (a - a).is_zero()


def test_float_evaluation_matches_definition(rng):
    """Test that coeff_to_float equals the sum of q * pi^(2k)."""
    for _ in range(CASES):
        a = random_coeff(rng, 3)
        direct = sum(float(q) * math.pi ** (2 * k) for k, q in a.terms)
        assert coeff_to_float(a) == pytest.approx(direct, rel=1e-13, abs=1e-13)


def test_format_parse_round_trip(rng):
    """Test that parse_coeff reads back what format_coeff writes."""
    for _ in range(CASES):
        a = random_coeff(rng, 3)
        assert parse_coeff(format_coeff(a)) == a


def test_format_examples():
    """Test the text form of a few coefficients."""
    value = PiCoeff.from_mapping({0: Fraction(1, 3), 1: -2, 2: 1})
    assert format_coeff(value) == "1/3 - 2*pi^2 + pi^4"
    assert format_coeff(PiCoeff.zero()) == "0"
    assert format_coeff(PiCoeff.pi2(Fraction(-1, 3))) == "-1/3*pi^2"


def test_normal_form_drops_zeros():
    """Test that zero coefficients vanish from the representation."""
    value = PiCoeff.from_mapping({0: 0, 1: 2, 3: 0})
    assert value.terms == ((1, Fraction(2)),)
    assert (PiCoeff.pi2(1) - PiCoeff.pi2(1)).terms == ()


def test_rejects_inexact_values():
    """Test that floats and negative powers are refused."""
    with pytest.raises(TypeError):
        PiCoeff.rational(0.5)
    with pytest.raises(ValueError):
        PiCoeff.from_mapping({-1: 1})


def test_parse_rejects_odd_powers():
    """Test that odd powers of pi are not coefficients."""
    with pytest.raises(ValueError):
        parse_coeff("pi^3")
    with pytest.raises(ValueError):
        parse_coeff("1 2")


def test_rational_value():
    """Test extraction of purely rational coefficients."""
    assert PiCoeff.rational(Fraction(3, 4)).rational_value() == Fraction(3, 4)
    assert PiCoeff.zero().rational_value() == 0
    with pytest.raises(ValueError):
        PiCoeff.pi2(1).rational_value()
