"""
Scripts for the VP calculus toolkit.

This package holds the pytest suites under test_scripts.
"""
