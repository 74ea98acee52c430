"""
Distribution Factors

This module defines the kernels a term is a product of: principal-value
poles, log kernels (and their distributional derivatives), Dirac delta
derivatives, Heaviside guards and smooth test-function factors.

Every factor knows how to normalize itself, substitute a variable, take a
partial derivative and evaluate numerically. Normalization and
differentiation return alternatives: a list of (coefficient, factors) pairs
whose sum replaces the factor. An empty list means the factor is zero.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, ClassVar, FrozenSet, List, Mapping, Tuple

import numpy as np

from vp_calculus.core.algebra.coeff import PiCoeff
from vp_calculus.core.errors import (
    DeltaNotEvaluable,
    SingularEvaluation,
    ThresholdUndefined,
    UnsupportedIntegrand,
)
from vp_calculus.core.expr.affine import AffineExpr, Var, format_affine
from vp_calculus.core.expr.testfn import PolynomialTestFn, TestFn

Alternatives = List[Tuple[PiCoeff, Tuple["Factor", ...]]]

ONE: Alternatives = [(PiCoeff.one(), ())]


def _rational(value) -> PiCoeff:
    return PiCoeff.rational(Fraction(value))


class Factor(ABC):
    """
    One kernel in a product term.
    """

    rank: ClassVar[int] = 99

    @abstractmethod
    def variables(self) -> FrozenSet[Var]:
        """Free variables of the factor."""

    def depends_on(self, name: Var) -> bool:
        return name in self.variables()

    @abstractmethod
    def substitute(self, name: Var, replacement: AffineExpr) -> "Factor":
        """Replace a variable by an affine expression (no normalization)."""

    @abstractmethod
    def normalize(self) -> Alternatives:
        """Canonical form as a sum of alternatives."""

    @abstractmethod
    def differentiate(self, name: Var) -> Alternatives:
        """Partial derivative with respect to ``name`` as a sum of alternatives."""

    @abstractmethod
    def evaluate(self, assignment: Mapping[Var, Any]) -> Any:
        """Numeric value; accepts floats or numpy arrays."""

    @abstractmethod
    def to_text(self) -> str:
        """Text form in the expression language."""

    def sort_key(self) -> Tuple[int, str]:
        return (self.rank, self.to_text())

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class VPPole(Factor):
    """
    Principal-value pole VP 1/arg^degree.
    """

    arg: AffineExpr
    degree: int = 1

    rank: ClassVar[int] = 1

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError(f"Pole degree must be at least 1, got {self.degree}")

    @property
    def var(self) -> Var:
        return self.arg.lead_var()

    @property
    def center(self) -> AffineExpr:
        return AffineExpr.var(self.var) - self.arg

    def variables(self) -> FrozenSet[Var]:
        return self.arg.variables()

    def substitute(self, name: Var, replacement: AffineExpr) -> "VPPole":
        return VPPole(self.arg.substitute(name, replacement), self.degree)

    def normalize(self) -> Alternatives:
        if self.arg.is_constant():
            if self.arg.constant == 0:
                raise SingularEvaluation("Pole with an identically vanishing argument")
            return [(_rational(self.arg.constant**-self.degree), ())]
        scale, monic = self.arg.monic()
        return [(_rational(scale**-self.degree), (VPPole(monic, self.degree),))]

    def differentiate(self, name: Var) -> Alternatives:
        slope = self.arg.coeff(name)
        if slope == 0:
            return []
        return [(_rational(-self.degree * slope), (VPPole(self.arg, self.degree + 1),))]

    def evaluate(self, assignment: Mapping[Var, Any]) -> Any:
        return 1.0 / self.arg.evaluate(assignment) ** self.degree

    def to_text(self) -> str:
        if self.degree == 1:
            return f"VP[1/({format_affine(self.arg)})]"
        return f"VP[1/({format_affine(self.arg)})^{self.degree}]"


@dataclass(frozen=True)
class LogAbs(Factor):
    """
    Log kernel ln|arg| for order 0, its order-th distributional derivative
    d^k/dL^k ln|L| otherwise. Order k >= 1 equals (-1)^(k-1) (k-1)! VP 1/L^k.
    """

    arg: AffineExpr
    order: int = 0

    rank: ClassVar[int] = 2

    def variables(self) -> FrozenSet[Var]:
        return self.arg.variables()

    def substitute(self, name: Var, replacement: AffineExpr) -> "LogAbs":
        return LogAbs(self.arg.substitute(name, replacement), self.order)

    def as_pole(self) -> Tuple[PiCoeff, VPPole]:
        """Rewrite an order k >= 1 kernel as a weighted VP pole."""
        if self.order < 1:
            raise ValueError("ln|L| has no pole form")
        k = self.order
        return _rational((-1) ** (k - 1) * math.factorial(k - 1)), VPPole(self.arg, k)

    def normalize(self) -> Alternatives:
        if self.arg.is_constant():
            value = self.arg.constant
            if value == 0:
                raise SingularEvaluation("Log kernel with an identically vanishing argument")
            if self.order:
                coeff, _ = self.as_pole()
                return [(coeff * _rational(value**-self.order), ())]
            if abs(value) == 1:
                return []
            return [(PiCoeff.one(), (LogAbs(AffineExpr.const(abs(value))),))]

        scale, monic = self.arg.monic()
        if self.order:
            return [(_rational(scale**-self.order), (LogAbs(monic, self.order),))]
        if abs(scale) == 1:
            return [(PiCoeff.one(), (LogAbs(monic),))]
        # ln|sL| = ln|s| + ln|L|
        return [
            (PiCoeff.one(), (LogAbs(AffineExpr.const(abs(scale))),)),
            (PiCoeff.one(), (LogAbs(monic),)),
        ]

    def differentiate(self, name: Var) -> Alternatives:
        slope = self.arg.coeff(name)
        if slope == 0:
            return []
        return [(_rational(slope), (LogAbs(self.arg, self.order + 1),))]

    def evaluate(self, assignment: Mapping[Var, Any]) -> Any:
        value = self.arg.evaluate(assignment)
        if self.order == 0:
            return np.log(np.abs(value))
        k = self.order
        return (-1) ** (k - 1) * math.factorial(k - 1) / value**k

    def to_text(self) -> str:
        if self.order == 0:
            return f"log|{format_affine(self.arg)}|"
        return f"log^({self.order})|{format_affine(self.arg)}|"


@dataclass(frozen=True)
class DeltaDeriv(Factor):
    """
    Dirac delta derivative delta^(order)(arg).
    """

    arg: AffineExpr
    order: int = 0

    rank: ClassVar[int] = 0

    @property
    def var(self) -> Var:
        return self.arg.lead_var()

    @property
    def center(self) -> AffineExpr:
        return AffineExpr.var(self.var) - self.arg

    def variables(self) -> FrozenSet[Var]:
        return self.arg.variables()

    def substitute(self, name: Var, replacement: AffineExpr) -> "DeltaDeriv":
        return DeltaDeriv(self.arg.substitute(name, replacement), self.order)

    def normalize(self) -> Alternatives:
        if self.arg.is_constant():
            if self.arg.constant == 0:
                raise SingularEvaluation("Delta with an identically vanishing argument")
            return []
        scale, monic = self.arg.monic()
        # delta^(k)(s L) = s^-k |s|^-1 delta^(k)(L)
        weight = scale ** -self.order / abs(scale)
        return [(_rational(weight), (DeltaDeriv(monic, self.order),))]

    def differentiate(self, name: Var) -> Alternatives:
        slope = self.arg.coeff(name)
        if slope == 0:
            return []
        return [(_rational(slope), (DeltaDeriv(self.arg, self.order + 1),))]

    def evaluate(self, assignment: Mapping[Var, Any]) -> Any:
        raise DeltaNotEvaluable(f"Cannot evaluate {self.to_text()} pointwise")

    def to_text(self) -> str:
        if self.order == 0:
            return f"delta({format_affine(self.arg)})"
        return f"delta^({self.order})({format_affine(self.arg)})"


@dataclass(frozen=True)
class HeavisideGuard(Factor):
    """
    Heaviside step theta(arg). Never evaluated exactly at arg = 0.
    """

    arg: AffineExpr

    rank: ClassVar[int] = 3

    def variables(self) -> FrozenSet[Var]:
        return self.arg.variables()

    def substitute(self, name: Var, replacement: AffineExpr) -> "HeavisideGuard":
        return HeavisideGuard(self.arg.substitute(name, replacement))

    def normalize(self) -> Alternatives:
        if self.arg.is_constant():
            value = self.arg.constant
            if value == 0:
                raise ThresholdUndefined("Heaviside guard at exactly zero")
            return ONE if value > 0 else []
        scale, monic = self.arg.monic()
        guard = HeavisideGuard(monic if scale > 0 else -monic)
        return [(PiCoeff.one(), (guard,))]

    def differentiate(self, name: Var) -> Alternatives:
        if self.arg.coeff(name) == 0:
            return []
        raise UnsupportedIntegrand(f"Derivative of {self.to_text()} with respect to {name}")

    def evaluate(self, assignment: Mapping[Var, Any]) -> Any:
        value = np.asarray(self.arg.evaluate(assignment), dtype=float)
        if np.any(value == 0.0):
            raise ThresholdUndefined(f"{self.to_text()} evaluated at its jump")
        result = np.where(value > 0.0, 1.0, 0.0)
        return result if result.ndim else float(result)

    def to_text(self) -> str:
        return f"theta({format_affine(self.arg)})"


@lru_cache(maxsize=4096)
def _derivative_of(fn: TestFn, orders: Tuple[int, ...]) -> TestFn:
    return fn.derivative(orders)


@dataclass(frozen=True)
class Smooth(Factor):
    """
    Smooth factor fn^(orders)(args) with affine arguments.
    """

    fn: TestFn
    args: Tuple[AffineExpr, ...]
    orders: Tuple[int, ...] = ()

    rank: ClassVar[int] = 4

    def __post_init__(self):
        if len(self.args) != self.fn.arity:
            raise ValueError(f"{self.fn.name} takes {self.fn.arity} arguments, got {len(self.args)}")
        if not self.orders:
            object.__setattr__(self, "orders", (0,) * len(self.args))

    def variables(self) -> FrozenSet[Var]:
        names: FrozenSet[Var] = frozenset()
        for arg in self.args:
            names = names | arg.variables()
        return names

    def substitute(self, name: Var, replacement: AffineExpr) -> "Smooth":
        return Smooth(self.fn, tuple(arg.substitute(name, replacement) for arg in self.args), self.orders)

    def sort_key(self) -> Tuple[int, str]:
        # two functions may share a name
        return (self.rank, f"{self.to_text()} {self.fn!r}")

    def normalize(self) -> Alternatives:
        if self.fn.is_zero(self.orders):
            return []
        constant = self.fn.constant_value(self.orders)
        if constant is not None:
            return [(_rational(constant), ())]
        if isinstance(self.fn, PolynomialTestFn) and all(arg.is_constant() for arg in self.args):
            value = self.fn.derivative(self.orders).evaluate_exact([arg.constant for arg in self.args])
            return [(_rational(value), ())] if value != 0 else []
        if isinstance(self.fn, PolynomialTestFn):
            fixed = {i: arg.constant for i, arg in enumerate(self.args) if arg.is_constant()}
            if fixed and self.fn.derivative(self.orders).restrict(fixed).is_zero():
                return []
        return [(PiCoeff.one(), (self,))]

    def differentiate(self, name: Var) -> Alternatives:
        result: Alternatives = []
        for index, arg in enumerate(self.args):
            slope = arg.coeff(name)
            if slope == 0:
                continue
            orders = list(self.orders)
            orders[index] += 1
            result.append((_rational(slope), (Smooth(self.fn, self.args, tuple(orders)),)))
        return result

    def evaluate(self, assignment: Mapping[Var, Any]) -> Any:
        target = _derivative_of(self.fn, self.orders)
        return target(*[arg.evaluate(assignment) for arg in self.args])

    def to_text(self) -> str:
        args = ", ".join(format_affine(arg) for arg in self.args)
        if any(self.orders):
            orders = ",".join(str(k) for k in self.orders)
            return f"{self.fn.name}^({orders})({args})"
        return f"{self.fn.name}({args})"
