"""
Coefficient Algebra

This module provides exact arithmetic in the ring Q[pi^2]. Every constant that
shows up in a reduction formula (pi^2/3, -2*pi^2/3, pi^4, binomials, inverse
factorials) is held as a PiCoeff so results can be compared structurally.
"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Tuple, Union

Number = Union[int, Fraction]

_TERM_RE = re.compile(
    r"""
    \s*(?P<sign>[+-])?\s*
    (?:
        (?P<num>\d+(?:/\d+)?)(?:\s*\*\s*pi\^(?P<pow_a>\d+))?
      | pi\^(?P<pow_b>\d+)
    )\s*
    """,
    re.VERBOSE,
)


def _as_fraction(value: Number) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"Expected an exact rational, got {type(value).__name__}")


@dataclass(frozen=True)
class PiCoeff:
    """
    Exact element of Q[pi^2].

    ``terms`` holds (k, q) pairs meaning q * pi^(2k), sorted by k with no zero q.
    The empty tuple is the zero coefficient.
    """

    terms: Tuple[Tuple[int, Fraction], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, Number]) -> "PiCoeff":
        """
        Build a normalized coefficient from a power -> rational map.

        Args:
            mapping (Mapping[int, Number]): Power of pi^2 to rational coefficient

        Returns:
            PiCoeff: The normalized coefficient
        """
        cleaned = []
        for power, value in mapping.items():
            if power < 0:
                raise ValueError(f"Negative power of pi^2: {power}")
            value = _as_fraction(value)
            if value != 0:
                cleaned.append((int(power), value))
        return cls(tuple(sorted(cleaned)))

    @classmethod
    def rational(cls, value: Number) -> "PiCoeff":
        return cls.from_mapping({0: value})

    @classmethod
    def pi2(cls, value: Number = 1, power: int = 1) -> "PiCoeff":
        """Return value * pi^(2*power)."""
        return cls.from_mapping({power: value})

    @classmethod
    def zero(cls) -> "PiCoeff":
        return cls()

    @classmethod
    def one(cls) -> "PiCoeff":
        return cls.rational(1)

    def as_dict(self) -> Dict[int, Fraction]:
        return dict(self.terms)

    def __iter__(self) -> Iterator[Tuple[int, Fraction]]:
        return iter(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return all(power == 0 for power, _ in self.terms)

    def rational_value(self) -> Fraction:
        """
        Return the value of a purely rational coefficient.

        Raises:
            ValueError: If the coefficient contains a pi^2 power
        """
        if not self.is_rational():
            raise ValueError(f"Coefficient {self} is not rational")
        return self.terms[0][1] if self.terms else Fraction(0)

    def __add__(self, other: "PiCoeff") -> "PiCoeff":
        other = _coerce(other)
        merged = self.as_dict()
        for power, value in other.terms:
            merged[power] = merged.get(power, Fraction(0)) + value
        return PiCoeff.from_mapping(merged)

    __radd__ = __add__

    def __neg__(self) -> "PiCoeff":
        return PiCoeff(tuple((power, -value) for power, value in self.terms))

    def __sub__(self, other: "PiCoeff") -> "PiCoeff":
        return self + (-_coerce(other))

    def __rsub__(self, other: "PiCoeff") -> "PiCoeff":
        return _coerce(other) - self

    def __mul__(self, other: "PiCoeff") -> "PiCoeff":
        other = _coerce(other)
        product: Dict[int, Fraction] = {}
        for p1, v1 in self.terms:
            for p2, v2 in other.terms:
                product[p1 + p2] = product.get(p1 + p2, Fraction(0)) + v1 * v2
        return PiCoeff.from_mapping(product)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "PiCoeff":
        divisor = _as_fraction(other)
        if divisor == 0:
            raise ZeroDivisionError("PiCoeff division by zero")
        return PiCoeff(tuple((power, value / divisor) for power, value in self.terms))

    def __float__(self) -> float:
        return coeff_to_float(self)

    def __str__(self) -> str:
        return format_coeff(self)


def _coerce(value: Union[PiCoeff, Number]) -> PiCoeff:
    if isinstance(value, PiCoeff):
        return value
    return PiCoeff.rational(value)


def coeff_add(a: PiCoeff, b: PiCoeff) -> PiCoeff:
    """
    Exact sum of two coefficients.

    Args:
        a (PiCoeff): First operand
        b (PiCoeff): Second operand

    Returns:
        PiCoeff: a + b
    """
    return a + b


def coeff_mul(a: PiCoeff, b: PiCoeff) -> PiCoeff:
    """
    Exact product of two coefficients.

    Args:
        a (PiCoeff): First operand
        b (PiCoeff): Second operand

    Returns:
        PiCoeff: a * b
    """
    return a * b


def coeff_to_float(a: PiCoeff) -> float:
    """
    Evaluate a coefficient in double precision.

    Args:
        a (PiCoeff): The coefficient

    Returns:
        float: Its numeric value
    """
    pi_squared = math.pi * math.pi
    # Horner in pi^2, highest power first
    if not a.terms:
        return 0.0
    mapping = a.as_dict()
    total = 0.0
    for power in range(max(mapping), -1, -1):
        total = total * pi_squared + float(mapping.get(power, 0))
    return total


def _format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_coeff(a: PiCoeff) -> str:
    """
    Render a coefficient as text, e.g. ``1/3 - 2*pi^2 + pi^4``.

    Args:
        a (PiCoeff): The coefficient

    Returns:
        str: The text form, parseable by parse_coeff
    """
    if a.is_zero():
        return "0"
    pieces = []
    for index, (power, value) in enumerate(a.terms):
        sign = "-" if value < 0 else "+"
        magnitude = abs(value)
        if power == 0:
            body = _format_rational(magnitude)
        elif magnitude == 1:
            body = f"pi^{2 * power}"
        else:
            body = f"{_format_rational(magnitude)}*pi^{2 * power}"
        if index == 0:
            pieces.append(body if sign == "+" else f"-{body}")
        else:
            pieces.append(f" {sign} {body}")
    return "".join(pieces)


def parse_coeff(text: str) -> PiCoeff:
    """
    Parse the text form produced by format_coeff.

    Args:
        text (str): Coefficient text

    Returns:
        PiCoeff: The parsed coefficient

    Raises:
        ValueError: If the text is not a valid coefficient
    """
    stripped = text.strip()
    if not stripped:
        raise ValueError("Empty coefficient")
    if stripped == "0":
        return PiCoeff.zero()

    result = PiCoeff.zero()
    position = 0
    first = True
    while position < len(stripped):
        match = _TERM_RE.match(stripped, position)
        if match is None or match.end() == position:
            raise ValueError(f"Invalid coefficient text at offset {position}: {text!r}")
        if not first and match.group("sign") is None:
            raise ValueError(f"Missing operator at offset {position}: {text!r}")
        first = False

        value = Fraction(match.group("num")) if match.group("num") else Fraction(1)
        pi_power = match.group("pow_a") or match.group("pow_b") or "0"
        exponent = int(pi_power)
        if exponent % 2:
            raise ValueError(f"Only even powers of pi are allowed: pi^{exponent}")
        if match.group("sign") == "-":
            value = -value
        result = result + PiCoeff.pi2(value, exponent // 2)
        position = match.end()
    return result
