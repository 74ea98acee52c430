"""
Distribution expression AST for vp_calculus.

This package contains the affine forms, test functions, factor kinds and the
DistExpr sum-of-products type, with its normal form, printer and parser.
"""

from vp_calculus.core.expr.affine import AffineExpr, Var, format_affine, order_variables
from vp_calculus.core.expr.expr import (
    DeferredIntegral,
    DistExpr,
    DistTerm,
    LogIntegralResidual,
    differentiate,
    differentiate_n,
    evaluate_numeric,
    evaluate_pointwise,
    mul_expr,
    normalize,
    substitute,
)
from vp_calculus.core.expr.factors import DeltaDeriv, Factor, HeavisideGuard, LogAbs, Smooth, VPPole
from vp_calculus.core.expr.parser import parse_affine, parse_expr
from vp_calculus.core.expr.printer import format_expr
from vp_calculus.core.expr.testfn import CallableTestFn, NamedTestFn, PolynomialTestFn, TestFn

__all__ = [
    "AffineExpr",
    "CallableTestFn",
    "DeferredIntegral",
    "DeltaDeriv",
    "DistExpr",
    "DistTerm",
    "Factor",
    "HeavisideGuard",
    "LogAbs",
    "LogIntegralResidual",
    "NamedTestFn",
    "PolynomialTestFn",
    "Smooth",
    "TestFn",
    "VPPole",
    "Var",
    "differentiate",
    "differentiate_n",
    "evaluate_numeric",
    "evaluate_pointwise",
    "format_affine",
    "format_expr",
    "mul_expr",
    "normalize",
    "order_variables",
    "parse_affine",
    "parse_expr",
    "substitute",
]
