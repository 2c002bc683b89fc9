"""Middleware for the FastAPI application"""

import time
from typing import Callable
from fastapi import Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from loguru import logger
from prometheus_fastapi_instrumentator import Instrumentator

from .config import settings
from .models.common import ErrorResponse
from .utils.errors import ToolkitException
from .utils.logging import StructuredLogger, generate_run_id


async def add_request_id_middleware(request: Request, call_next: Callable) -> Response:
    """Add request ID to all requests for tracing"""
    request_id = request.headers.get("X-Request-ID") or generate_run_id()
    request.state.request_id = request_id

    StructuredLogger.set_run_context(request_id)
    try:
        with logger.contextualize(request_id=request_id):
            response = await call_next(request)
    finally:
        StructuredLogger.clear_run_context()

    response.headers["X-Request-ID"] = request_id
    return response


async def logging_middleware(request: Request, call_next: Callable) -> Response:
    """Log all requests with timing information"""
    start_time = time.time()
    request_id = getattr(request.state, 'request_id', 'unknown')

    logger.bind(
        method=request.method,
        url=str(request.url),
        request_id=request_id
    ).info("Request started")

    response = await call_next(request)

    duration = time.time() - start_time
    response.headers["X-Process-Time-Ms"] = str(round(duration * 1000, 2))
    logger.bind(
        method=request.method,
        url=str(request.url),
        status_code=response.status_code,
        duration_ms=round(duration * 1000, 2),
        request_id=request_id
    ).info("Request completed")

    return response


def setup_cors_middleware(app):
    """Setup CORS middleware"""
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_credentials=False,
        allow_methods=["GET", "POST", "OPTIONS"],
        allow_headers=["Content-Type", "X-Request-ID", "Accept", "Origin", "User-Agent"],
        expose_headers=["X-Request-ID", "X-Process-Time-Ms"],
    )


def setup_metrics_middleware(app):
    """Setup Prometheus metrics middleware"""
    if settings.enable_metrics:
        instrumentator = Instrumentator(
            should_group_status_codes=False,
            should_ignore_untemplated=True,
            should_group_untemplated=False,
            excluded_handlers=["/health", "/metrics"],
        )

        instrumentator.instrument(app)
        instrumentator.expose(app, endpoint="/metrics")


def toolkit_error_response(request: Request, exc: ToolkitException) -> JSONResponse:
    """JSON body and status code for a toolkit exception"""
    request_id = getattr(request.state, 'request_id', 'unknown')
    logger.bind(code=exc.code, request_id=request_id).warning(f"Request failed: {exc.message}")
    details = dict(exc.details, request_id=request_id)
    body = ErrorResponse.create(exc.message, code=exc.code, details=details)
    return JSONResponse(status_code=exc.status_code, content=body.model_dump(mode="json"))


async def error_handling_middleware(request: Request, call_next: Callable) -> Response:
    """Global error handling middleware"""
    request_id = getattr(request.state, 'request_id', 'unknown')

    try:
        return await call_next(request)
    except ToolkitException as e:
        return toolkit_error_response(request, e)
    except Exception as e:
        logger.bind(
            error=str(e),
            method=request.method,
            url=str(request.url)
        ).exception(f"Unhandled exception in request {request_id}")

        body = ErrorResponse.create(
            "Internal server error", code="INTERNAL_ERROR", details={"request_id": request_id}
        )
        return JSONResponse(status_code=500, content=body.model_dump(mode="json"))
