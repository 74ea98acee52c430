"""
Affine Expressions

This module provides exact affine forms c0 + sum(ci * vi) over named variables.
They carry pole centers, delta supports and integration limits.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Iterable, Mapping, Optional, Sequence, Tuple, Union

Var = str
Number = Union[int, Fraction]

_NATURAL_RE = re.compile(r"(\d+)")


def var_sort_key(name: Var) -> Tuple:
    """
    Natural sort key for variable names, so z2 sorts before z10.

    Args:
        name (str): Variable name

    Returns:
        tuple: Sort key
    """
    parts = _NATURAL_RE.split(name)
    return tuple((0, int(part)) if part.isdigit() else (1, part) for part in parts if part)


def order_variables(names: Iterable[Var], first: Sequence[Var] = ()) -> Tuple[Var, ...]:
    """
    Put variables in canonical order, optionally forcing some to the front.

    Args:
        names (Iterable[str]): Variables to order
        first (Sequence[str]): Variables that must come first, in this order

    Returns:
        tuple: Ordered variable names
    """
    pool = set(names)
    head = [name for name in first if name in pool]
    tail = sorted(pool.difference(head), key=var_sort_key)
    return tuple(head) + tuple(tail)


def _format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class AffineExpr:
    """
    Exact affine form ``constant + sum(coeff * var)``.

    ``coeffs`` is sorted in canonical variable order and never holds a zero.
    """

    constant: Fraction = Fraction(0)
    coeffs: Tuple[Tuple[Var, Fraction], ...] = ()

    @classmethod
    def build(cls, constant: Number = 0, coeffs: Optional[Mapping[Var, Number]] = None) -> "AffineExpr":
        cleaned = {
            name: Fraction(value) for name, value in (coeffs or {}).items() if Fraction(value) != 0
        }
        ordered = tuple((name, cleaned[name]) for name in order_variables(cleaned))
        return cls(Fraction(constant), ordered)

    @classmethod
    def var(cls, name: Var) -> "AffineExpr":
        return cls.build(0, {name: 1})

    @classmethod
    def const(cls, value: Number) -> "AffineExpr":
        return cls.build(value)

    def as_dict(self) -> Dict[Var, Fraction]:
        return dict(self.coeffs)

    def coeff(self, name: Var) -> Fraction:
        for var_name, value in self.coeffs:
            if var_name == name:
                return value
        return Fraction(0)

    def variables(self) -> FrozenSet[Var]:
        return frozenset(name for name, _ in self.coeffs)

    def depends_on(self, name: Var) -> bool:
        return any(var_name == name for var_name, _ in self.coeffs)

    def is_constant(self) -> bool:
        return not self.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs and self.constant == 0

    def __add__(self, other: Union["AffineExpr", Number]) -> "AffineExpr":
        other = _coerce(other)
        merged = self.as_dict()
        for name, value in other.coeffs:
            merged[name] = merged.get(name, Fraction(0)) + value
        return AffineExpr.build(self.constant + other.constant, merged)

    __radd__ = __add__

    def __neg__(self) -> "AffineExpr":
        return self.scale(-1)

    def __sub__(self, other: Union["AffineExpr", Number]) -> "AffineExpr":
        return self + (-_coerce(other))

    def __rsub__(self, other: Union["AffineExpr", Number]) -> "AffineExpr":
        return _coerce(other) - self

    def __mul__(self, factor: Number) -> "AffineExpr":
        return self.scale(factor)

    __rmul__ = __mul__

    def scale(self, factor: Number) -> "AffineExpr":
        factor = Fraction(factor)
        if factor == 0:
            return AffineExpr()
        return AffineExpr(
            self.constant * factor,
            tuple((name, value * factor) for name, value in self.coeffs),
        )

    def drop(self, name: Var) -> "AffineExpr":
        """Return the expression with the ``name`` term removed."""
        return AffineExpr(self.constant, tuple(item for item in self.coeffs if item[0] != name))

    def substitute(self, name: Var, replacement: "AffineExpr") -> "AffineExpr":
        """
        Replace a variable by another affine expression.

        Args:
            name (str): Variable to replace
            replacement (AffineExpr): Expression to put in its place

        Returns:
            AffineExpr: The substituted expression
        """
        weight = self.coeff(name)
        if weight == 0:
            return self
        return self.drop(name) + replacement.scale(weight)

    def lead_var(self, order: Sequence[Var] = ()) -> Optional[Var]:
        """
        First variable of the expression in canonical order.

        Args:
            order (Sequence[str]): Variables that take precedence, in this order

        Returns:
            str: The leading variable, or None for a constant
        """
        if not self.coeffs:
            return None
        return order_variables(self.variables(), order)[0]

    def monic(self, order: Sequence[Var] = ()) -> Tuple[Fraction, "AffineExpr"]:
        """
        Split off the leading coefficient.

        Returns ``(s, m)`` with ``self == s * m`` and ``m`` having coefficient 1
        on its leading variable. Constants return ``(constant, 1)``; zero raises.

        Args:
            order (Sequence[str]): Variables that take precedence, in this order

        Returns:
            tuple: (scale, monic expression)
        """
        lead = self.lead_var(order)
        if lead is None:
            if self.constant == 0:
                raise ZeroDivisionError("Cannot normalize the zero affine expression")
            return self.constant, AffineExpr.const(1)
        scale = self.coeff(lead)
        return scale, self.scale(1 / scale)

    def evaluate(self, assignment: Mapping[Var, Any]) -> Any:
        """
        Evaluate numerically. Values may be floats or numpy arrays.

        Args:
            assignment (Mapping[str, Any]): Values of the variables

        Returns:
            The value of the expression

        Raises:
            KeyError: If a variable is not assigned
        """
        total: Any = float(self.constant)
        for name, value in self.coeffs:
            if name not in assignment:
                raise KeyError(f"Variable {name!r} is not bound")
            total = total + float(value) * assignment[name]
        return total

    def evaluate_exact(self, assignment: Mapping[Var, Fraction]) -> Fraction:
        total = self.constant
        for name, value in self.coeffs:
            total += value * Fraction(assignment[name])
        return total

    def __str__(self) -> str:
        return format_affine(self)


def _coerce(value: Union[AffineExpr, Number]) -> AffineExpr:
    if isinstance(value, AffineExpr):
        return value
    return AffineExpr.const(value)


def format_affine(expr: AffineExpr) -> str:
    """
    Render an affine expression, e.g. ``eta + 1/2*xi - 1``.

    Args:
        expr (AffineExpr): The expression

    Returns:
        str: Its text form
    """
    pieces = []
    for name, value in expr.coeffs:
        magnitude = abs(value)
        body = name if magnitude == 1 else f"{_format_rational(magnitude)}*{name}"
        pieces.append(("-" if value < 0 else "+", body))
    if expr.constant != 0 or not pieces:
        pieces.append(("-" if expr.constant < 0 else "+", _format_rational(abs(expr.constant))))

    text = ""
    for index, (sign, body) in enumerate(pieces):
        if index == 0:
            text = body if sign == "+" else f"-{body}"
        else:
            text += f" {sign} {body}"
    return text
