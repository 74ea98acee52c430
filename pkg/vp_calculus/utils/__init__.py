"""
Utility functions for the VP calculus toolkit.

This package contains the logging configuration and seed-controlled random
sampling of test functions and expressions.
"""
