"""
VP Product Reduction

This module rewrites products of principal-value poles that share a variable
into sums of single poles plus delta chains. The pair formula is valid when
the shared variable is integrated first; its two free constants are fixed at
C1 = 0 and C2 = pi^2, the only values that make repeated integration
independent of the order.
"""

import math
from fractions import Fraction
from itertools import combinations, permutations
from typing import List, Sequence, Tuple

from vp_calculus.core.algebra.coeff import PiCoeff
from vp_calculus.core.errors import IdenticalCenters, SpecError
from vp_calculus.core.expr.affine import AffineExpr, Var, order_variables
from vp_calculus.core.expr.expr import (
    DistExpr,
    DistTerm,
    differentiate_n,
    mul_expr,
    normalize,
    substitute,
)
from vp_calculus.core.expr.factors import DeltaDeriv, VPPole
from vp_calculus.utils.logging import get_logger

logger = get_logger("vp_calculus.reduction")

C2 = PiCoeff.pi2(1)
MAX_REDUCTION_ROUNDS = 10000

Pole = Tuple[AffineExpr, int]


def _check_centers(x: Var, z1: AffineExpr, z2: AffineExpr) -> None:
    if z1.depends_on(x) or z2.depends_on(x):
        raise SpecError(f"Pole centers must not contain the variable {x}")
    if z1 == z2:
        raise IdenticalCenters(f"Centers coincide: {z1}")


def reduce_pair_simple(x: Var, z1: AffineExpr, z2: AffineExpr) -> DistExpr:
    """
    Reduce VP 1/(x - z1) * VP 1/(x - z2).

    Returns VP 1/(z1 - z2) [VP 1/(x - z1) - VP 1/(x - z2)] + pi^2 delta(x - z1) delta(x - z2),
    normalized.

    Args:
        x (str): The shared variable
        z1 (AffineExpr): First center
        z2 (AffineExpr): Second center

    Returns:
        DistExpr: The reduced expression

    Raises:
        IdenticalCenters: If z1 equals z2
    """
    _check_centers(x, z1, z2)
    xv = AffineExpr.var(x)
    spread = VPPole(z1 - z2)
    return DistExpr.from_terms(
        [
            (1, (spread, VPPole(xv - z1))),
            (-1, (spread, VPPole(xv - z2))),
            (C2, (DeltaDeriv(xv - z1), DeltaDeriv(xv - z2))),
        ]
    )


def reduce_pair_general(x: Var, z1: AffineExpr, n1: int, z2: AffineExpr, n2: int) -> DistExpr:
    """
    Reduce VP 1/(x - z1)^n1 * VP 1/(x - z2)^n2.

    Binomial-weighted single poles in x from both orientations plus
    (-1)^(n1+n2) pi^2 / ((n1-1)! (n2-1)!) delta^(n1-1)(x - z1) delta^(n2-1)(x - z2).

    Args:
        x (str): The shared variable
        z1 (AffineExpr): First center
        n1 (int): Degree of the first pole
        z2 (AffineExpr): Second center
        n2 (int): Degree of the second pole

    Returns:
        DistExpr: The reduced expression

    Raises:
        IdenticalCenters: If z1 equals z2
    """
    if n1 < 1 or n2 < 1:
        raise SpecError(f"Pole degrees must be positive, got {n1} and {n2}")
    _check_centers(x, z1, z2)
    xv = AffineExpr.var(x)

    terms = []
    for k in range(n1):
        weight = math.comb(n2 + k - 1, k) * (-1) ** k
        terms.append((weight, (VPPole(z1 - z2, n2 + k), VPPole(xv - z1, n1 - k))))
    for k in range(n2):
        weight = math.comb(n1 + k - 1, k) * (-1) ** k
        terms.append((weight, (VPPole(z2 - z1, n1 + k), VPPole(xv - z2, n2 - k))))

    delta_weight = Fraction((-1) ** (n1 + n2), math.factorial(n1 - 1) * math.factorial(n2 - 1))
    terms.append(
        (C2 * PiCoeff.rational(delta_weight), (DeltaDeriv(xv - z1, n1 - 1), DeltaDeriv(xv - z2, n2 - 1)))
    )
    return DistExpr.from_terms(terms)


def reduce_pair_by_differentiation(x: Var, z1: AffineExpr, n1: int, z2: AffineExpr, n2: int) -> DistExpr:
    """
    Same product as reduce_pair_general, obtained by differentiating the simple
    reduction n1 - 1 times in z1 and n2 - 1 times in z2.

    Returns:
        DistExpr: The reduced expression
    """
    _check_centers(x, z1, z2)
    c1, c2 = "__center1", "__center2"
    simple = reduce_pair_simple(x, AffineExpr.var(c1), AffineExpr.var(c2))
    lifted = differentiate_n(differentiate_n(simple, c1, n1 - 1), c2, n2 - 1)
    lifted = lifted.scale(PiCoeff.rational(Fraction(1, math.factorial(n1 - 1) * math.factorial(n2 - 1))))
    return substitute(substitute(lifted, c1, z1), c2, z2)


def _poles_in(term: DistTerm, x: Var) -> List[VPPole]:
    return [factor for factor in term.of_kind(VPPole, x)]


def _pole_center(pole: VPPole, x: Var) -> Tuple[Fraction, AffineExpr]:
    """Write pole.arg as a * (x - c); return (a, c)."""
    slope = pole.arg.coeff(x)
    return slope, AffineExpr.var(x) - pole.arg.scale(1 / slope)


def _reduce_first_pair(term: DistTerm, x: Var, poles: Sequence[VPPole]) -> DistExpr:
    first, second = poles[0], poles[1]
    a1, c1 = _pole_center(first, x)
    a2, c2 = _pole_center(second, x)
    scale = PiCoeff.rational(a1 ** -first.degree * a2 ** -second.degree) * term.coeff
    reduced = reduce_pair_general(x, c1, first.degree, c2, second.degree)
    rest = DistExpr((DistTerm(scale, term.without(first, second)),))
    return mul_expr(rest, reduced)


def reduce_in_variable(expr: DistExpr, x: Var, lead_only: bool = False) -> DistExpr:
    """
    Reduce every product of poles in ``x`` until each term holds at most one.

    Args:
        expr (DistExpr): The expression
        x (str): The shared variable
        lead_only (bool): Only pair poles whose leading variable is ``x``

    Returns:
        DistExpr: The reduced expression
    """
    current = normalize(expr)
    for _ in range(MAX_REDUCTION_ROUNDS):
        pending = []
        done = []
        for term in current.terms:
            poles = _poles_in(term, x)
            if lead_only:
                poles = [pole for pole in poles if pole.arg.lead_var() == x]
            if len(poles) >= 2:
                pending.append((term, poles))
            else:
                done.append(term)
        if not pending:
            return current
        result = normalize(DistExpr(tuple(done)))
        for term, poles in pending:
            result = result + _reduce_first_pair(term, x, poles)
        current = result
    raise RuntimeError(f"Pole reduction in {x} did not terminate")


def reduce_product(x: Var, poles: Sequence[Pole]) -> DistExpr:
    """
    Reduce a product of VP poles in ``x`` by multiplying in one pole at a time.

    Args:
        x (str): The shared variable
        poles (Sequence[tuple]): (center, degree) pairs with distinct centers

    Returns:
        DistExpr: Sum of terms with at most one pole in x each

    Raises:
        IdenticalCenters: If two centers coincide
    """
    if not poles:
        raise SpecError("reduce_product needs at least one pole")
    for (first, _), (second, _) in combinations(poles, 2):
        if first == second:
            raise IdenticalCenters(f"Centers coincide: {first}")
    xv = AffineExpr.var(x)
    center, degree = poles[0]
    result = DistExpr.product(VPPole(xv - center, degree))
    for center, degree in poles[1:]:
        result = reduce_in_variable(mul_expr(result, DistExpr.product(VPPole(xv - center, degree))), x)
        logger.debug(f"Reduced product now has {len(result.terms)} terms")
    return result


def canonicalize(expr: DistExpr) -> DistExpr:
    """
    Partial-fraction normal form: every pair of poles sharing a leading
    variable is reduced, variables taken in canonical order, until nothing
    changes.

    Args:
        expr (DistExpr): The expression

    Returns:
        DistExpr: The canonical expression
    """
    current = normalize(expr)
    for _ in range(MAX_REDUCTION_ROUNDS):
        repeated = set()
        for term in current.terms:
            leads = [pole.arg.lead_var() for pole in term.of_kind(VPPole)]
            repeated.update(name for name in leads if leads.count(name) > 1)
        if not repeated:
            return current
        current = reduce_in_variable(current, order_variables(repeated)[0], lead_only=True)
    raise RuntimeError("Canonicalization did not terminate")


def three_pole_closed_form(x: Var, centers: Sequence[AffineExpr]) -> DistExpr:
    """
    Symmetric closed form of VP 1/(x - z1) VP 1/(x - z2) VP 1/(x - z3).

    Returns:
        DistExpr: sum_n VP 1/(x - zn) [prod VP 1/(zn - zk) - pi^2/3 prod delta(zn - zk)
        + pi^2 prod delta(x - zk)]
    """
    if len(centers) != 3:
        raise SpecError("Exactly three centers are required")
    xv = AffineExpr.var(x)
    terms = []
    for n, zn in enumerate(centers):
        others = [zk for k, zk in enumerate(centers) if k != n]
        pole = VPPole(xv - zn)
        terms.append((1, (pole,) + tuple(VPPole(zn - zk) for zk in others)))
        terms.append((PiCoeff.pi2(Fraction(-1, 3)), (pole,) + tuple(DeltaDeriv(zn - zk) for zk in others)))
        terms.append((C2, (pole,) + tuple(DeltaDeriv(xv - zk) for zk in others)))
    return DistExpr.from_terms(terms)


def four_pole_closed_form(
    x: Var, centers: Sequence[AffineExpr], permutation_weight: Fraction = Fraction(1, 4)
) -> DistExpr:
    """
    Symmetric closed form of the product of four simple poles in ``x``.

    The delta-pair sum runs over all 24 orderings of the centers with
    ``permutation_weight`` each. On the delta support the four orderings
    sharing an unordered pair give the same function, so 1/4 reproduces the
    pair-by-pair reduction.

    Returns:
        DistExpr: The closed form
    """
    if len(centers) != 4:
        raise SpecError("Exactly four centers are required")
    xv = AffineExpr.var(x)
    third = PiCoeff.pi2(Fraction(1, 3))
    terms = []
    for n, zn in enumerate(centers):
        pole = VPPole(xv - zn)
        others = [k for k in range(4) if k != n]
        terms.append((1, (pole,) + tuple(VPPole(zn - centers[k]) for k in others)))
        for l in others:
            rest = [k for k in others if k != l]
            factors = (pole, VPPole(centers[l] - zn)) + tuple(DeltaDeriv(zn - centers[k]) for k in rest)
            terms.append((third, factors))
    pair_weight = PiCoeff.pi2(permutation_weight)
    for p1, p2, p3, p4 in permutations(range(4)):
        z = centers
        factors = (
            DeltaDeriv(xv - z[p1]),
            DeltaDeriv(xv - z[p2]),
            VPPole(z[p1] - z[p3]),
            VPPole(z[p2] - z[p4]),
        )
        terms.append((pair_weight, factors))
    terms.append((PiCoeff.pi2(-1, 2), tuple(DeltaDeriv(xv - zn) for zn in centers)))
    return DistExpr.from_terms(terms)
