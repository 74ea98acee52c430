"""
Tests for the VP calculus toolkit.

Run with ``pytest`` from the repository root; ``-m "not slow"`` skips the
multi-dimensional integrations.
"""
