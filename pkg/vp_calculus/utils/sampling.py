"""
Random Sampling Utilities

This module generates seed-controlled random inputs for property checks and
the verification suite: polynomial test functions that vanish on the boundary
of the unit box, points inside the box, and random distribution expressions
built from every factor kind.
"""

from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from vp_calculus.core.algebra.coeff import PiCoeff
from vp_calculus.core.expr.affine import AffineExpr
from vp_calculus.core.expr.expr import DistExpr, DistTerm
from vp_calculus.core.expr.factors import DeltaDeriv, Factor, HeavisideGuard, LogAbs, Smooth, VPPole
from vp_calculus.core.expr.testfn import PolynomialTestFn

DEFAULT_VARIABLES = ("x", "y", "z1", "z2")


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    """
    Create a random generator.

    Args:
        seed (int, optional): Seed; the settings seed when omitted

    Returns:
        numpy.random.Generator: The generator
    """
    if seed is None:
        from vp_calculus.config.settings import get_settings

        seed = get_settings().seed
    return np.random.default_rng(seed)


def _small_fraction(rng: np.random.Generator, limit: int = 5) -> Fraction:
    numerator = int(rng.integers(-limit, limit + 1))
    denominator = int(rng.integers(1, limit + 1))
    return Fraction(numerator, denominator)


def random_polynomial(
    rng: np.random.Generator, arity: int, degree: int = 4, bump_power: int = 0, name: str = "u"
) -> PolynomialTestFn:
    """
    Random polynomial of total degree <= ``degree`` with small rational coefficients,
    multiplied by the unit-box bump (t(1-t))^bump_power in every argument.

    A bump power p makes the weight and its first p - 1 derivatives vanish on
    the boundary, so endpoint poles up to degree p drop out.

    Args:
        rng (numpy.random.Generator): Random source
        arity (int): Number of arguments
        degree (int): Maximal total degree of the random part
        bump_power (int): Vanishing order on the box boundary
        name (str): Name of the test function

    Returns:
        PolynomialTestFn: The weight
    """
    mapping = {}
    for exponents in np.ndindex(*([degree + 1] * arity)):
        if sum(exponents) <= degree and rng.random() < 0.6:
            mapping[tuple(int(e) for e in exponents)] = _small_fraction(rng)
    if not any(mapping.values()):
        mapping[(0,) * arity] = Fraction(1)
    poly = PolynomialTestFn.from_mapping(arity, mapping, name)
    if bump_power:
        poly = poly * PolynomialTestFn.bump(arity, bump_power, name)
    return poly.renamed(name)


def random_points(rng: np.random.Generator, count: int, bounds: Sequence[float] = (0.0, 1.0), margin: float = 0.05) -> List[float]:
    """Points in (lo, hi) kept ``margin`` away from both ends."""
    lo, hi = bounds
    return [float(v) for v in rng.uniform(lo + margin, hi - margin, size=count)]


def random_affine(
    rng: np.random.Generator, variables: Sequence[str] = DEFAULT_VARIABLES, max_vars: int = 2
) -> AffineExpr:
    """Random non-constant affine expression with small rational coefficients."""
    count = int(rng.integers(1, max_vars + 1))
    chosen = rng.choice(len(variables), size=count, replace=False)
    coeffs = {}
    for index in chosen:
        value = _small_fraction(rng, 3)
        coeffs[variables[int(index)]] = value if value != 0 else Fraction(1)
    return AffineExpr.build(_small_fraction(rng, 3), coeffs)


def random_coeff(rng: np.random.Generator, max_power: int = 2) -> PiCoeff:
    """Random element of Q[pi^2]."""
    return PiCoeff.from_mapping({k: _small_fraction(rng) for k in range(max_power + 1)})


def random_factor(
    rng: np.random.Generator, variables: Sequence[str] = DEFAULT_VARIABLES, deltas: bool = True
) -> Factor:
    """Random factor of any symbolic kind; smooth factors use a fixed small polynomial."""
    kind = int(rng.integers(0, 5))
    if kind == 2 and not deltas:
        kind = int(rng.choice([0, 1, 3, 4]))
    arg = random_affine(rng, variables)
    if kind == 0:
        return VPPole(arg, int(rng.integers(1, 3)))
    if kind == 1:
        return LogAbs(arg, int(rng.integers(0, 3)))
    if kind == 2:
        return DeltaDeriv(arg, int(rng.integers(0, 2)))
    if kind == 3:
        return HeavisideGuard(arg)
    weight = PolynomialTestFn.from_mapping(1, {(0,): 1, (2,): _small_fraction(rng) or 1}, name="w")
    return Smooth(weight, (arg,))


def random_expr(
    rng: np.random.Generator,
    variables: Sequence[str] = DEFAULT_VARIABLES,
    max_terms: int = 3,
    max_factors: int = 3,
    deltas: bool = True,
) -> DistExpr:
    """
    Random, not normalized, distribution expression.

    Args:
        rng (numpy.random.Generator): Random source
        variables (Sequence[str]): Variable names to draw from
        max_terms (int): Maximal number of terms
        max_factors (int): Maximal number of factors per term
        deltas (bool): Whether delta factors may occur

    Returns:
        DistExpr: The expression
    """
    terms = []
    for _ in range(int(rng.integers(1, max_terms + 1))):
        factors = tuple(random_factor(rng, variables, deltas) for _ in range(int(rng.integers(0, max_factors + 1))))
        coeff = random_coeff(rng, 1)
        terms.append(DistTerm(coeff if not coeff.is_zero() else PiCoeff.one(), factors))
    return DistExpr(tuple(terms))


def random_delta_chain(rng: np.random.Generator, variables: Sequence[str] = DEFAULT_VARIABLES, length: int = 2) -> List[DeltaDeriv]:
    """Plain deltas whose arguments are differences or shifts of the given variables."""
    chain = []
    for _ in range(length):
        i, j = rng.choice(len(variables), size=2, replace=False)
        arg = AffineExpr.var(variables[int(i)]) - AffineExpr.var(variables[int(j)])
        if rng.random() < 0.5:
            arg = arg + _small_fraction(rng, 2)
        chain.append(DeltaDeriv(arg))
    return chain
