"""
VP Calculus

This package reduces products of principal-value (VP) poles, integrates
distribution expressions one variable at a time and checks the results
against an independent quadrature oracle.
"""

__version__ = "1.0.0"
