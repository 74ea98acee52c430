"""
Documentation for the VP calculus toolkit.

This package contains the expression-language grammar and the API documentation.
"""
