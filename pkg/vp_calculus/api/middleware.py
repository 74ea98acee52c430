"""
API Middleware for the VP calculus toolkit

This module defines middleware for the FastAPI application: request/response
logging and the translation of library errors into JSON error responses.
"""

import time

from fastapi import Request
from starlette.middleware.base import BaseHTTPMiddleware
from starlette.responses import JSONResponse

from vp_calculus.core.errors import ParseError, SpecError, VPCalculusError
from vp_calculus.utils.logging import get_context_logger, get_logger

logger = get_logger("vp_calculus.api")


def error_status(exc: Exception) -> int:
    """
    HTTP status for an exception: 400 for bad input text, 422 for
    mathematical failures, 500 otherwise.

    Args:
        exc (Exception): The exception

    Returns:
        int: The status code
    """
    if isinstance(exc, (ParseError, SpecError)):
        return 400
    if isinstance(exc, VPCalculusError):
        return 422
    return 500


def error_body(exc: Exception) -> dict:
    """JSON body describing an exception."""
    body = {"detail": str(exc), "error": type(exc).__name__}
    if isinstance(exc, ParseError):
        body.update({"line": exc.line, "column": exc.column, "expected": list(exc.expected)})
    if getattr(exc, "step", None) is not None:
        body["step"] = exc.step
    return body


class LoggingMiddleware(BaseHTTPMiddleware):
    """
    Middleware logging each request with its duration, which is also
    returned in the X-Process-Time header (milliseconds).
    """

    async def dispatch(self, request: Request, call_next):
        """
        Process the request and log information about it.

        Args:
            request (Request): The incoming request
            call_next (callable): The next middleware or route handler

        Returns:
            Response: The response from the next middleware or route handler
        """
        request_logger = get_context_logger(
            "vp_calculus.api", {"method": request.method, "path": request.url.path}
        )
        started = time.perf_counter()
        request_logger.debug(f"Request from {request.client.host if request.client else 'unknown'}")
        response = await call_next(request)
        elapsed_ms = (time.perf_counter() - started) * 1e3
        response.headers["X-Process-Time"] = f"{elapsed_ms:.2f}"
        request_logger.info(f"Response {response.status_code} in {elapsed_ms:.1f} ms")
        return response


class ErrorHandlingMiddleware(BaseHTTPMiddleware):
    """
    Middleware for handling errors.
    """

    async def dispatch(self, request: Request, call_next):
        """
        Process the request and turn any exception into a JSON response.

        Args:
            request (Request): The incoming request
            call_next (callable): The next middleware or route handler

        Returns:
            Response: The response from the next middleware or route handler
        """
        try:
            return await call_next(request)
        except Exception as e:
            status = error_status(e)
            if status == 500:
                logger.error(f"Unhandled exception: {str(e)}")
            else:
                logger.warning(f"{type(e).__name__} on {request.url.path}: {str(e)}")
            return JSONResponse(status_code=status, content=error_body(e))


def setup_middleware(app):
    """
    Set up middleware for the FastAPI application.

    Args:
        app: The FastAPI application
    """
    # Add middleware in reverse order (last added is executed first)
    app.add_middleware(ErrorHandlingMiddleware)
    app.add_middleware(LoggingMiddleware)
