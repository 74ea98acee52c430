"""
Distribution Expressions

This module provides DistTerm and DistExpr, the sum-of-products AST that the
reduction and integration layers work on, together with its canonical normal
form, products, substitution, differentiation and pointwise evaluation.
"""

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, ClassVar, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from vp_calculus.core.algebra.coeff import PiCoeff, coeff_to_float
from vp_calculus.core.errors import DeltaNotEvaluable, SingularEvaluation
from vp_calculus.core.expr.affine import AffineExpr, Var, format_affine
from vp_calculus.core.expr.deltas import reduce_delta_chain
from vp_calculus.core.expr.factors import (
    Alternatives,
    DeltaDeriv,
    Factor,
    HeavisideGuard,
    LogAbs,
    VPPole,
)

SINGULAR_TOLERANCE = 1e-12

Scalar = Union[PiCoeff, int, Fraction]


def _as_coeff(value: Scalar) -> PiCoeff:
    return value if isinstance(value, PiCoeff) else PiCoeff.rational(value)


def _factor_order(factors: Iterable[Factor]) -> Tuple[Factor, ...]:
    return tuple(sorted(factors, key=lambda factor: factor.sort_key()))


@dataclass(frozen=True)
class DistTerm:
    """
    A coefficient times a product of factors.
    """

    coeff: PiCoeff
    factors: Tuple[Factor, ...] = ()

    def variables(self) -> FrozenSet[Var]:
        names: FrozenSet[Var] = frozenset()
        for factor in self.factors:
            names = names | factor.variables()
        return names

    def depends_on(self, name: Var) -> bool:
        return any(factor.depends_on(name) for factor in self.factors)

    def key(self) -> Tuple:
        return tuple(factor.sort_key() for factor in self.factors)

    def of_kind(self, kind: type, name: Optional[Var] = None) -> List[Factor]:
        """
        Factors of one kind, optionally only those depending on ``name``.
        """
        return [
            factor
            for factor in self.factors
            if isinstance(factor, kind) and (name is None or factor.depends_on(name))
        ]

    def without(self, *removed: Factor) -> Tuple[Factor, ...]:
        """Factors of the term with one occurrence of each ``removed`` factor dropped."""
        remaining = list(self.factors)
        for factor in removed:
            remaining.remove(factor)
        return tuple(remaining)


@dataclass(frozen=True)
class DistExpr:
    """
    Finite sum of DistTerms.
    """

    terms: Tuple[DistTerm, ...] = ()

    @classmethod
    def zero(cls) -> "DistExpr":
        return cls()

    @classmethod
    def constant(cls, value: Scalar) -> "DistExpr":
        return cls((DistTerm(_as_coeff(value)),))

    @classmethod
    def one(cls) -> "DistExpr":
        return cls.constant(1)

    @classmethod
    def product(cls, *factors: Factor, coeff: Scalar = 1) -> "DistExpr":
        """Normalized single-term expression ``coeff * prod(factors)``."""
        return normalize(cls((DistTerm(_as_coeff(coeff), tuple(factors)),)))

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[Scalar, Sequence[Factor]]]) -> "DistExpr":
        return normalize(cls(tuple(DistTerm(_as_coeff(c), tuple(f)) for c, f in terms)))

    @property
    def free_vars(self) -> FrozenSet[Var]:
        names: FrozenSet[Var] = frozenset()
        for term in self.terms:
            names = names | term.variables()
        return names

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "DistExpr") -> "DistExpr":
        return normalize(DistExpr(self.terms + other.terms))

    def __neg__(self) -> "DistExpr":
        return self.scale(-1)

    def __sub__(self, other: "DistExpr") -> "DistExpr":
        return self + (-other)

    def __mul__(self, other: Union["DistExpr", Scalar]) -> "DistExpr":
        if isinstance(other, DistExpr):
            return mul_expr(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, value: Scalar) -> "DistExpr":
        value = _as_coeff(value)
        if value.is_zero():
            return DistExpr()
        return DistExpr(tuple(DistTerm(term.coeff * value, term.factors) for term in self.terms))

    def substitute(self, name: Var, replacement: AffineExpr) -> "DistExpr":
        return substitute(self, name, replacement)

    def __str__(self) -> str:
        from vp_calculus.core.expr.printer import format_expr

        return format_expr(self)


def _merge(factors: Sequence[Factor]) -> Optional[Tuple[Factor, ...]]:
    """Merge equal-argument poles and duplicate guards; None if the product vanishes."""
    degrees: Dict[AffineExpr, int] = {}
    guards = set()
    others = []
    for factor in factors:
        if isinstance(factor, VPPole):
            degrees[factor.arg] = degrees.get(factor.arg, 0) + factor.degree
        elif isinstance(factor, HeavisideGuard):
            if HeavisideGuard(-factor.arg) in guards:
                return None
            guards.add(factor)
        else:
            others.append(factor)
    poles = [VPPole(arg, degree) for arg, degree in degrees.items()]
    return _factor_order(others + poles + list(guards))


def _expand(coeff: PiCoeff, factors: Sequence[Factor]) -> List[Tuple[PiCoeff, Tuple[Factor, ...]]]:
    partials: List[Tuple[PiCoeff, List[Factor]]] = [(coeff, [])]
    for factor in factors:
        alternatives = factor.normalize()
        partials = [
            (c1 * c2, head + list(tail))
            for c1, head in partials
            for c2, tail in alternatives
            if not (c1 * c2).is_zero()
        ]
        if not partials:
            return []
    result = []
    for c, fs in partials:
        merged = _merge(fs)
        if merged is not None:
            result.append((c, merged))
    return result


def _vanishing_argument(factors: Sequence[Factor]) -> bool:
    return any(
        isinstance(factor, (VPPole, LogAbs, HeavisideGuard)) and factor.arg.is_zero()
        for factor in factors
    )


def _normalize_term(term: DistTerm) -> List[Tuple[PiCoeff, Tuple[Factor, ...]]]:
    result = []
    for coeff, factors in _expand(term.coeff, term.factors):
        deltas = [f for f in factors if isinstance(f, DeltaDeriv)]
        rest = [f for f in factors if not isinstance(f, DeltaDeriv)]
        if not deltas:
            result.append((coeff, factors))
            continue
        chain = reduce_delta_chain(deltas)
        if chain.degenerate:
            result.append((coeff, factors))
            continue
        for weight, orders in chain.terms:
            body = rest
            # f(x) delta(x - c) = f(c) delta(x - c) for each order-0 pivot
            for pivot, value in chain.substitutions(orders):
                candidate = [factor.substitute(pivot, value) for factor in body]
                if not _vanishing_argument(candidate):
                    body = candidate
            for c2, fs2 in _expand(coeff * PiCoeff.rational(weight), body):
                result.append((c2, _factor_order(chain.deltas(orders) + fs2)))
    return result


def normalize(e: DistExpr) -> DistExpr:
    """
    Canonical form of an expression.

    Factors are scaled to unit leading coefficient, equal-center poles merged,
    delta chains put into reduced row echelon form with order-0 pivots
    substituted into the other factors, and like terms collected.

    Args:
        e (DistExpr): The expression

    Returns:
        DistExpr: The normalized expression
    """
    collected: Dict[Tuple[Factor, ...], PiCoeff] = {}
    for term in e.terms:
        for coeff, factors in _normalize_term(term):
            collected[factors] = collected.get(factors, PiCoeff.zero()) + coeff
    terms = [DistTerm(coeff, factors) for factors, coeff in collected.items() if not coeff.is_zero()]
    terms.sort(key=lambda term: (len(term.factors), term.key()))
    return DistExpr(tuple(terms))


def mul_expr(a: DistExpr, b: DistExpr) -> DistExpr:
    """
    Distributed product of two expressions, normalized.

    Poles in one variable with distinct centers stay side by side; vp_reduction
    rewrites them.

    Args:
        a (DistExpr): Left factor
        b (DistExpr): Right factor

    Returns:
        DistExpr: The product
    """
    terms = [
        DistTerm(t1.coeff * t2.coeff, t1.factors + t2.factors) for t1 in a.terms for t2 in b.terms
    ]
    return normalize(DistExpr(tuple(terms)))


def substitute(e: DistExpr, name: Var, replacement: AffineExpr) -> DistExpr:
    """
    Replace a variable by an affine expression everywhere and renormalize.
    """
    terms = [
        DistTerm(term.coeff, tuple(factor.substitute(name, replacement) for factor in term.factors))
        for term in e.terms
    ]
    return normalize(DistExpr(tuple(terms)))


def _alternatives_to_terms(coeff: PiCoeff, head: Tuple[Factor, ...], alternatives: Alternatives,
                           tail: Tuple[Factor, ...]) -> List[DistTerm]:
    return [DistTerm(coeff * c, head + fs + tail) for c, fs in alternatives]


def differentiate(e: DistExpr, name: Var) -> DistExpr:
    """
    Partial derivative in the distribution sense, by the product rule.

    Args:
        e (DistExpr): The expression
        name (str): Variable to differentiate in

    Returns:
        DistExpr: The derivative, normalized
    """
    terms: List[DistTerm] = []
    for term in e.terms:
        for index, factor in enumerate(term.factors):
            if not factor.depends_on(name):
                continue
            terms.extend(
                _alternatives_to_terms(
                    term.coeff,
                    term.factors[:index],
                    factor.differentiate(name),
                    term.factors[index + 1:],
                )
            )
    return normalize(DistExpr(tuple(terms)))


def differentiate_n(e: DistExpr, name: Var, times: int) -> DistExpr:
    for _ in range(times):
        e = differentiate(e, name)
    return e


def evaluate_numeric(e: DistExpr, assignment: Mapping[Var, Any]) -> Any:
    """
    Evaluate without singularity checks. Values may be numpy arrays.

    Args:
        e (DistExpr): A delta-free expression
        assignment (Mapping[str, Any]): Variable values

    Returns:
        The value, broadcast over array inputs
    """
    total: Any = 0.0
    for term in e.terms:
        value: Any = coeff_to_float(term.coeff)
        for factor in term.factors:
            value = value * factor.evaluate(assignment)
        total = total + value
    return total


def evaluate_pointwise(e: DistExpr, assignment: Mapping[Var, float], tolerance: float = SINGULAR_TOLERANCE) -> float:
    """
    Evaluate an expression at a nonsingular point.

    VP poles and log kernels evaluate as ordinary functions away from their
    singular sets.

    Args:
        e (DistExpr): The expression
        assignment (Mapping[str, float]): Variable values
        tolerance (float): Distance from zero that counts as a singular hit

    Returns:
        float: The value

    Raises:
        DeltaNotEvaluable: If a delta factor is present
        SingularEvaluation: If a pole or log argument is within tolerance of zero
    """
    for term in e.terms:
        for factor in term.factors:
            if isinstance(factor, DeltaDeriv):
                raise DeltaNotEvaluable(f"Cannot evaluate {factor.to_text()} pointwise")
            if isinstance(factor, (VPPole, LogAbs)):
                if abs(factor.arg.evaluate(assignment)) < tolerance:
                    raise SingularEvaluation(f"{factor.to_text()} is singular at {dict(assignment)}")
    return float(evaluate_numeric(e, assignment))


def _fresh_name(name: Var, taken: FrozenSet[Var]) -> Var:
    index = 1
    while f"{name}_{index}" in taken:
        index += 1
    return f"{name}_{index}"


@dataclass(frozen=True)
class DeferredIntegral(Factor):
    """
    Integral of ``body`` over ``var`` from ``lower`` to ``upper``, kept symbolic
    and evaluated numerically once the outer variables are bound.
    """

    var: Var
    lower: AffineExpr
    upper: AffineExpr
    body: DistExpr

    rank: ClassVar[int] = 5

    def variables(self) -> FrozenSet[Var]:
        return (self.body.free_vars - {self.var}) | self.lower.variables() | self.upper.variables()

    def substitute(self, name: Var, replacement: AffineExpr) -> "DeferredIntegral":
        if name == self.var:
            return self
        current = self
        if replacement.depends_on(self.var):
            taken = self.variables() | replacement.variables() | self.body.free_vars
            fresh = _fresh_name(self.var, taken)
            current = replace(self, var=fresh, body=substitute(self.body, self.var, AffineExpr.var(fresh)))
        return replace(
            current,
            lower=current.lower.substitute(name, replacement),
            upper=current.upper.substitute(name, replacement),
            body=current.body.substitute(name, replacement),
        )

    def normalize(self) -> Alternatives:
        body = normalize(self.body)
        if body.is_zero() or self.lower == self.upper:
            return []
        return [(PiCoeff.one(), (replace(self, body=body),))]

    def differentiate(self, name: Var) -> Alternatives:
        result: Alternatives = []
        inner = differentiate(self.body, name)
        if not inner.is_zero():
            result.append((PiCoeff.one(), (replace(self, body=inner),)))
        for limit, sign in ((self.upper, 1), (self.lower, -1)):
            slope = limit.coeff(name)
            if slope == 0:
                continue
            edge = substitute(self.body, self.var, limit)
            for term in edge.terms:
                result.append((term.coeff * PiCoeff.rational(sign * slope), term.factors))
        return result

    def _integrate_at(self, values: Mapping[Var, float]) -> float:
        from vp_calculus.core.integrate.numeric import integrate_expression

        return integrate_expression(self.body, self.var, self.lower, self.upper, values).value

    def evaluate(self, assignment: Mapping[Var, Any]) -> Any:
        names = sorted(self.variables())
        arrays = [np.asarray(assignment[name], dtype=float) for name in names]
        shape = np.broadcast(*arrays).shape if arrays else ()
        if not shape:
            return self._integrate_at({name: float(a) for name, a in zip(names, arrays)})
        flat = [np.broadcast_to(a, shape).ravel() for a in arrays]
        out = np.empty(int(np.prod(shape)))
        for index in range(out.size):
            out[index] = self._integrate_at({name: float(f[index]) for name, f in zip(names, flat)})
        return out.reshape(shape)

    def to_text(self) -> str:
        return f"int[{self.var}={format_affine(self.lower)}..{format_affine(self.upper)}]({self.body})"


@dataclass(frozen=True)
class LogIntegralResidual(DeferredIntegral):
    """
    The conventional integral int_a^b ln|x - y| u^(n)(x, ...) dx left over
    when a pole of degree n is integrated against a weight.
    """

    deriv_order: int = 0

    @property
    def center(self) -> Optional[AffineExpr]:
        for term in self.body.terms:
            for factor in term.factors:
                if isinstance(factor, LogAbs) and factor.depends_on(self.var):
                    return AffineExpr.var(self.var) - factor.arg.scale(1 / factor.arg.coeff(self.var))
        return None
