"""
Core functionality for the VP calculus toolkit.

This package contains the coefficient algebra, the distribution expression
AST, the pole reduction formulas, the integration engine, the quadrature
oracle and the verification scenarios.
"""
