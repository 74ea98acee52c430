"""
Shared fixtures for the vp_calculus tests.
"""

import pytest

from vp_calculus.config.settings import get_settings
from vp_calculus.utils.sampling import make_rng


@pytest.fixture
def settings():
    """Default settings."""
    return get_settings()


@pytest.fixture
def rng():
    """Seeded random generator, the same for every test."""
    return make_rng(12345)
