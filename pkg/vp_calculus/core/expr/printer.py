"""
Expression Printer

This module renders DistExpr values in the expression language read by
vp_calculus.core.expr.parser. Printing a normalized expression, parsing it and
printing again gives the same text.
"""

from typing import Tuple

from vp_calculus.core.algebra.coeff import PiCoeff, format_coeff
from vp_calculus.core.expr.expr import DistExpr, DistTerm


def _format_rational(value) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _coeff_prefix(coeff: PiCoeff, has_factors: bool) -> Tuple[str, str]:
    if len(coeff.terms) != 1:
        return "+", f"({format_coeff(coeff)})"
    power, value = coeff.terms[0]
    sign = "-" if value < 0 else "+"
    magnitude = abs(value)
    if power == 0:
        if magnitude == 1 and has_factors:
            return sign, ""
        return sign, _format_rational(magnitude)
    pi_text = f"pi^{2 * power}"
    if magnitude == 1:
        return sign, pi_text
    return sign, f"{_format_rational(magnitude)}*{pi_text}"


def format_term(term: DistTerm) -> Tuple[str, str]:
    """
    Render one term.

    Args:
        term (DistTerm): The term

    Returns:
        tuple: (sign, unsigned text)
    """
    factors = "*".join(factor.to_text() for factor in term.factors)
    sign, prefix = _coeff_prefix(term.coeff, bool(term.factors))
    if prefix and factors:
        return sign, f"{prefix}*{factors}"
    return sign, prefix or factors


def format_expr(expr: DistExpr) -> str:
    """
    Render an expression in the expression language.

    Args:
        expr (DistExpr): The expression

    Returns:
        str: Its text form
    """
    if not expr.terms:
        return "0"
    text = ""
    for index, term in enumerate(expr.terms):
        sign, body = format_term(term)
        if index == 0:
            text = body if sign == "+" else f"-{body}"
        else:
            text += f" {sign} {body}"
    return text
