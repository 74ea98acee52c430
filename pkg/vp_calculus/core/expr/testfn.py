"""
Test Functions

This module provides the smooth weights that distributions are integrated
against: exact multivariate polynomials, wrapped Python callables with a
finite-difference fallback for derivatives, and named placeholders produced by
the parser when no function is bound to a name.
"""

import math
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from vp_calculus.core.errors import MissingDerivatives, UnsupportedIntegrand

Orders = Tuple[int, ...]
Support = Tuple[Tuple[float, float], ...]

_MONOMIAL_RE = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?P<body>[^+-]+)"
)


class TestFn(ABC):
    """
    Smooth weight function of ``arity`` real arguments.
    """

    # Keeps pytest from collecting this class
    __test__ = False

    name: str
    arity: int

    @property
    def support(self) -> Support:
        return tuple((0.0, 1.0) for _ in range(self.arity))

    @abstractmethod
    def __call__(self, *args):
        """Evaluate at numeric arguments (floats or broadcastable numpy arrays)."""

    @abstractmethod
    def derivative(self, orders: Orders) -> "TestFn":
        """
        Return the partial derivative with the given multi-index.

        Args:
            orders (tuple): Derivative order per argument

        Returns:
            TestFn: The derivative

        Raises:
            MissingDerivatives: If the order cannot be supplied
        """

    def is_zero(self, orders: Optional[Orders] = None) -> bool:
        return False

    def constant_value(self, orders: Optional[Orders] = None) -> Optional[Fraction]:
        return None

    def _check_orders(self, orders: Orders) -> Orders:
        orders = tuple(int(k) for k in orders)
        if len(orders) != self.arity or any(k < 0 for k in orders):
            raise ValueError(f"Bad derivative multi-index {orders} for {self.name}/{self.arity}")
        return orders


@dataclass(frozen=True, eq=True)
class PolynomialTestFn(TestFn):
    """
    Multivariate polynomial with exact rational coefficients.

    ``terms`` holds (exponents, coefficient) pairs, sorted, without zeros.
    """

    __test__ = False

    arity: int
    terms: Tuple[Tuple[Orders, Fraction], ...] = ()
    name: str = "u"

    @classmethod
    def from_mapping(cls, arity: int, mapping: Mapping[Orders, object], name: str = "u") -> "PolynomialTestFn":
        cleaned: Dict[Orders, Fraction] = {}
        for exponents, value in mapping.items():
            exponents = tuple(int(e) for e in exponents)
            if len(exponents) != arity:
                raise ValueError(f"Monomial {exponents} does not match arity {arity}")
            value = Fraction(value)
            if value != 0:
                cleaned[exponents] = cleaned.get(exponents, Fraction(0)) + value
        return cls(arity, tuple(sorted(item for item in cleaned.items() if item[1] != 0)), name)

    @classmethod
    def constant(cls, value, arity: int = 1, name: str = "u") -> "PolynomialTestFn":
        return cls.from_mapping(arity, {(0,) * arity: value}, name)

    @classmethod
    def coordinate(cls, index: int, arity: int, name: str = "u") -> "PolynomialTestFn":
        exponents = tuple(1 if i == index else 0 for i in range(arity))
        return cls.from_mapping(arity, {exponents: 1}, name)

    @classmethod
    def bump(cls, arity: int, power: int, name: str = "u") -> "PolynomialTestFn":
        """
        Product of (t(1-t))^power over all arguments.

        It vanishes to order ``power`` on the boundary of the unit box.
        """
        result = cls.constant(1, arity, name)
        for index in range(arity):
            t = cls.coordinate(index, arity, name)
            edge = t * (cls.constant(1, arity, name) - t)
            for _ in range(power):
                result = result * edge
        return result

    def renamed(self, name: str) -> "PolynomialTestFn":
        return PolynomialTestFn(self.arity, self.terms, name)

    def as_dict(self) -> Dict[Orders, Fraction]:
        return dict(self.terms)

    def degree(self) -> int:
        return max((sum(exponents) for exponents, _ in self.terms), default=0)

    def __add__(self, other: "PolynomialTestFn") -> "PolynomialTestFn":
        merged = self.as_dict()
        for exponents, value in other.terms:
            merged[exponents] = merged.get(exponents, Fraction(0)) + value
        return PolynomialTestFn.from_mapping(self.arity, merged, self.name)

    def __sub__(self, other: "PolynomialTestFn") -> "PolynomialTestFn":
        return self + other.scale(-1)

    def __mul__(self, other: "PolynomialTestFn") -> "PolynomialTestFn":
        if other.arity != self.arity:
            raise ValueError("Cannot multiply polynomials of different arity")
        product: Dict[Orders, Fraction] = {}
        for e1, v1 in self.terms:
            for e2, v2 in other.terms:
                key = tuple(a + b for a, b in zip(e1, e2))
                product[key] = product.get(key, Fraction(0)) + v1 * v2
        return PolynomialTestFn.from_mapping(self.arity, product, self.name)

    def scale(self, factor) -> "PolynomialTestFn":
        factor = Fraction(factor)
        return PolynomialTestFn.from_mapping(
            self.arity, {e: v * factor for e, v in self.terms}, self.name
        )

    def derivative(self, orders: Orders) -> "PolynomialTestFn":
        orders = self._check_orders(orders)
        result: Dict[Orders, Fraction] = {}
        for exponents, value in self.terms:
            if any(e < k for e, k in zip(exponents, orders)):
                continue
            weight = Fraction(1)
            for e, k in zip(exponents, orders):
                weight *= math.perm(e, k)
            key = tuple(e - k for e, k in zip(exponents, orders))
            result[key] = result.get(key, Fraction(0)) + value * weight
        return PolynomialTestFn.from_mapping(self.arity, result, self.name)

    def is_zero(self, orders: Optional[Orders] = None) -> bool:
        target = self.derivative(orders) if orders else self
        return not target.terms

    def constant_value(self, orders: Optional[Orders] = None) -> Optional[Fraction]:
        target = self.derivative(orders) if orders else self
        if not target.terms:
            return Fraction(0)
        if len(target.terms) == 1 and not any(target.terms[0][0]):
            return target.terms[0][1]
        return None

    def restrict(self, values: Mapping[int, Fraction]) -> "PolynomialTestFn":
        """Fix the arguments at the given positions to constants."""
        result: Dict[Orders, Fraction] = {}
        for exponents, value in self.terms:
            for index, constant in values.items():
                value *= Fraction(constant) ** exponents[index]
            key = tuple(0 if i in values else e for i, e in enumerate(exponents))
            result[key] = result.get(key, Fraction(0)) + value
        return PolynomialTestFn.from_mapping(self.arity, result, self.name)

    def evaluate_exact(self, args: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for exponents, value in self.terms:
            monomial = value
            for arg, e in zip(args, exponents):
                monomial *= Fraction(arg) ** e
            total += monomial
        return total

    def __call__(self, *args):
        if len(args) != self.arity:
            raise ValueError(f"{self.name} expects {self.arity} arguments, got {len(args)}")
        arrays = [np.asarray(arg, dtype=float) for arg in args]
        total = np.zeros(np.broadcast(*arrays).shape) if arrays else np.zeros(())
        for exponents, value in self.terms:
            monomial = float(value)
            for array, e in zip(arrays, exponents):
                if e:
                    monomial = monomial * array**e
            total = total + monomial
        return total if total.ndim else float(total)

    def __str__(self) -> str:
        return format_polynomial(self)


class CallableTestFn(TestFn):
    """
    Test function wrapping a Python callable.

    Known partial derivatives can be supplied in ``derivatives`` keyed by
    multi-index. Missing ones fall back to central differences refined once by
    Richardson extrapolation, unless ``finite_differences`` is off.
    """

    __test__ = False

    def __init__(
        self,
        func: Callable,
        arity: int,
        name: str = "u",
        derivatives: Optional[Mapping[Orders, Callable]] = None,
        support: Optional[Support] = None,
        finite_differences: bool = True,
        scale: float = 1.0,
    ):
        self.func = func
        self.arity = arity
        self.name = name
        self.derivatives = dict(derivatives or {})
        self._support = support
        self.finite_differences = finite_differences
        self.scale = scale

    @property
    def support(self) -> Support:
        return self._support or super().support

    def __call__(self, *args):
        return self.func(*args)

    def derivative(self, orders: Orders) -> TestFn:
        orders = self._check_orders(orders)
        if not any(orders):
            return self
        if orders in self.derivatives:
            return CallableTestFn(self.derivatives[orders], self.arity, self.name, support=self._support)
        if not self.finite_differences:
            raise MissingDerivatives(f"{self.name} has no derivative of order {orders}")
        return CallableTestFn(
            _finite_difference(self.func, orders, self.scale), self.arity, self.name, support=self._support
        )

    def __repr__(self) -> str:
        return f"CallableTestFn({self.name!r}, arity={self.arity})"


@dataclass(frozen=True)
class NamedTestFn(TestFn):
    """
    Unbound function name from parsed text. It has no values.
    """

    __test__ = False

    name: str
    arity: int

    def __call__(self, *args):
        raise UnsupportedIntegrand(f"No test function is bound to the name {self.name!r}")

    def derivative(self, orders: Orders) -> TestFn:
        self._check_orders(orders)
        return self


def _central_difference(func: Callable, index: int, order: int, step: float) -> Callable:
    def evaluate(*args):
        total = 0.0
        for j in range(order + 1):
            shifted = list(args)
            shifted[index] = np.asarray(args[index], dtype=float) + (order / 2 - j) * step
            total = total + (-1) ** j * math.comb(order, j) * func(*shifted)
        return total / step**order

    return evaluate


def _finite_difference(func: Callable, orders: Orders, scale: float) -> Callable:
    current = func
    for index, order in enumerate(orders):
        if not order:
            continue
        step = np.finfo(float).eps ** (1.0 / (order + 2)) * scale
        coarse = _central_difference(current, index, order, step)
        fine = _central_difference(current, index, order, step / 2)

        def refined(*args, coarse=coarse, fine=fine):
            return (4.0 * fine(*args) - coarse(*args)) / 3.0

        current = refined
    return current


def format_polynomial(poly: PolynomialTestFn, variables: Optional[Sequence[str]] = None) -> str:
    """
    Render a polynomial with ``variables`` (default t1, t2, ...) as text.

    Args:
        poly (PolynomialTestFn): The polynomial
        variables (Sequence[str], optional): Argument names

    Returns:
        str: Text such as ``1 + 2*t1*t2^2``
    """
    names = list(variables or [f"t{i + 1}" for i in range(poly.arity)])
    if not poly.terms:
        return "0"
    pieces = []
    for exponents, value in poly.terms:
        factors = []
        for name, e in zip(names, exponents):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        magnitude = abs(value)
        if not factors:
            body = str(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(magnitude)] + factors)
        pieces.append(("-" if value < 0 else "+", body))
    text = pieces[0][1] if pieces[0][0] == "+" else f"-{pieces[0][1]}"
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def parse_polynomial(text: str, variables: Sequence[str], name: str = "u") -> PolynomialTestFn:
    """
    Parse a polynomial such as ``1 + 2*x*z^2 - 1/3*x^4``.

    Args:
        text (str): Polynomial text
        variables (Sequence[str]): Argument names in argument order
        name (str): Function name

    Returns:
        PolynomialTestFn: The polynomial

    Raises:
        ValueError: If the text is not a polynomial in ``variables``
    """
    index = {var: position for position, var in enumerate(variables)}
    mapping: Dict[Orders, Fraction] = {}
    stripped = text.strip()
    if not stripped:
        raise ValueError("Empty polynomial")
    for match in _MONOMIAL_RE.finditer(stripped):
        body = match.group("body").strip()
        if not body:
            continue
        value = Fraction(-1 if match.group("sign") == "-" else 1)
        exponents = [0] * len(variables)
        for piece in body.split("*"):
            piece = piece.strip()
            base, _, power = piece.partition("^")
            base = base.strip()
            if base in index:
                exponents[index[base]] += int(power) if power else 1
            else:
                try:
                    value *= Fraction(base) ** (int(power) if power else 1)
                except ValueError as exc:
                    raise ValueError(f"Unknown symbol {base!r} in polynomial {text!r}") from exc
        key = tuple(exponents)
        mapping[key] = mapping.get(key, Fraction(0)) + value
    return PolynomialTestFn.from_mapping(len(variables), mapping, name)


# lin(b - a) stands for the length of an interval with affine limits
LINEAR = PolynomialTestFn.coordinate(0, 1, name="lin")

BUILTIN_FUNCTIONS: Dict[str, TestFn] = {"lin": LINEAR}
