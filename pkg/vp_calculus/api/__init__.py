"""
HTTP API for the VP calculus toolkit.

This package exposes reduction, integration, oracle quadrature and the
verification scenarios over FastAPI, with request/response models and
middleware.
"""

from fastapi import FastAPI

from vp_calculus import __version__

# Create FastAPI application
app = FastAPI(
    title="VP Calculus API",
    description="Reduction and repeated integration of principal-value distributions",
    version=__version__,
)
