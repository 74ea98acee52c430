"""
VP Calculus API application

This module assembles the FastAPI application: importing the endpoints
registers the routes for reduction, integration, oracle quadrature, the
simplex integral and the verification suite, and the middleware is
installed on top. Serve it with ``python -m vp_calculus serve``.
"""

from vp_calculus.api import app
from vp_calculus.api.middleware import setup_middleware
from vp_calculus.utils.logging import get_logger

# Import API endpoints to register them with the app
import vp_calculus.api.endpoints  # noqa: F401

logger = get_logger("vp_calculus.api")

setup_middleware(app)
logger.debug(f"API assembled with {len(app.routes)} routes")
