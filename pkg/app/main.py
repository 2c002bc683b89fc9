"""
ABC Group Toolkit - FastAPI Application

HTTP surface over the exact decision procedures for abelian-by-cyclic
groups. Request bodies are the instance records the command-line front end
reads; responses are the same result records.
"""

from contextlib import asynccontextmanager
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, RedirectResponse
from loguru import logger

from .config import settings
from .routers import health, modules, decisions, gadgets
from .middleware import (
    add_request_id_middleware,
    logging_middleware,
    error_handling_middleware,
    setup_cors_middleware,
    setup_metrics_middleware,
    toolkit_error_response
)
from .dependencies import initialize_dependencies, cleanup_dependencies
from .models.common import SystemInfo
from .utils.errors import ToolkitException
from .utils.logging import setup_structured_logging, slog


setup_structured_logging()


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan management with dependency initialization"""
    logger.info(f"Starting {settings.app_name} v{settings.version}")
    logger.info(f"Environment: {settings.environment}")
    logger.info(f"Log level: {settings.log_level}")

    try:
        await initialize_dependencies()
        logger.info(
            f"Solver defaults: search_bound={settings.search_bound}, "
            f"probes={settings.probe_list}, gb_step_budget={settings.gb_step_budget}"
        )
        logger.info(f"Metrics enabled: {settings.enable_metrics}")
    except Exception as e:
        slog.error("Failed to initialize application", error=e)
        raise

    yield

    logger.info("Shutting down application...")
    try:
        await cleanup_dependencies()
        logger.info("Application shutdown complete")
    except Exception as e:
        slog.error("Error during shutdown", error=e)
        raise


app = FastAPI(
    title=settings.app_name,
    version=settings.version,
    description="""
    Exact computational algebra for abelian-by-cyclic groups A x| Z.

    ## Features

    - Strong Groebner bases over Z for Laurent polynomial modules
    - Submodule membership with certificates, syzygies, integer lattices
    - Monomial equations X^(zd) f1 = f0 with period, probe and span certificates
    - Coset intersection with verified witnesses
    - Divisibility gadgets and the module, quadratic, knapsack and wreath reductions
    """,
    debug=settings.debug,
    lifespan=lifespan,
    docs_url="/docs" if settings.enable_swagger else None,
    redoc_url="/redoc" if settings.enable_redoc else None,
    openapi_url="/openapi.json" if settings.enable_openapi else None,
)

# Setup middleware (order matters!)
app.middleware("http")(error_handling_middleware)
app.middleware("http")(logging_middleware)
app.middleware("http")(add_request_id_middleware)

setup_cors_middleware(app)
setup_metrics_middleware(app)

app.include_router(health.router, tags=["Health"])
app.include_router(modules.router)
app.include_router(decisions.router)
app.include_router(gadgets.router)


@app.exception_handler(ToolkitException)
async def toolkit_exception_handler(request: Request, exc: ToolkitException):
    """Map toolkit errors to their status code and error body"""
    return toolkit_error_response(request, exc)


@app.get("/", include_in_schema=False)
async def root():
    """Root endpoint - redirect to docs in development"""
    if settings.is_development and settings.enable_swagger:
        return RedirectResponse(url="/docs")
    return {
        "service": settings.app_name,
        "version": settings.version,
        "status": "running"
    }


@app.get("/info", response_model=SystemInfo, tags=["System"])
async def info() -> SystemInfo:
    """Get service information"""
    return SystemInfo(
        service=settings.app_name,
        version=settings.version,
        environment=settings.environment,
        defaults={
            "search_bound": settings.search_bound,
            "probe_list": settings.probe_list,
            "probe_search_cap": settings.probe_search_cap,
            "gb_step_budget": settings.gb_step_budget,
            "gb_cache_size": settings.gb_cache_size,
        },
        endpoints={
            "health": "/health",
            "groebner": "/v1/modules/groebner",
            "member": "/v1/modules/member",
            "syzygy": "/v1/modules/syzygy",
            "zlattice": "/v1/modules/zlattice",
            "monomial": "/v1/decide/monomial",
            "coset": "/v1/decide/coset",
            "subgroup": "/v1/decide/subgroup",
            "word": "/v1/decide/word",
            "gadget_compile": "/v1/gadgets/compile",
            "gadget_check": "/v1/gadgets/check",
            "gadget_instance": "/v1/gadgets/instance",
            "metrics": "/metrics" if settings.enable_metrics else None,
            "docs": "/docs" if settings.enable_swagger else None
        }
    )


@app.exception_handler(404)
async def not_found_handler(request: Request, exc):
    """Custom 404 handler"""
    return JSONResponse(
        status_code=404,
        content={
            "error": "Not Found",
            "message": f"The requested endpoint {request.url.path} was not found",
            "code": "NOT_FOUND"
        }
    )


if settings.debug:
    logger.warning("Application is running in DEBUG mode. Do not use in production!")


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        "app.main:app",
        host=settings.host,
        port=settings.port,
        reload=settings.debug,
        log_level=settings.log_level.lower(),
        access_log=True
    )
