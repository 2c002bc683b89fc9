"""Health check endpoints"""

from fastapi import APIRouter
from loguru import logger

from ..algebra.fpmod import gb_cache_info
from ..config import settings
from ..models import HealthResponse
from ..dependencies import ToolkitServiceDep


router = APIRouter()


@router.get(
    "/health",
    response_model=HealthResponse,
    summary="Health check",
    description="Check the health of the service and the Groebner basis cache",
    tags=["Health"]
)
async def health_check(toolkit_service: ToolkitServiceDep) -> HealthResponse:
    """
    Health check endpoint that reports service status and cache statistics

    Returns:
        HealthResponse with component status and cache counters
    """
    services = {
        "app": "healthy",
        "toolkit": "healthy" if toolkit_service else "unhealthy",
    }
    cache = gb_cache_info()
    if cache["maxsize"] < 1:
        services["gb_cache"] = "disabled"

    overall_status = "healthy"
    if any(status == "unhealthy" for status in services.values()):
        overall_status = "degraded"

    logger.debug(f"Health check completed: {overall_status}, cache {cache}")
    return HealthResponse(
        status=overall_status,
        version=settings.version,
        services=services,
        cache=cache
    )


@router.get(
    "/ready",
    summary="Readiness check",
    description="Check if the service is ready to handle requests",
    tags=["Health"]
)
async def readiness_check():
    """Readiness check endpoint for container orchestration"""
    return {"status": "ready"}


@router.get(
    "/live",
    summary="Liveness check",
    description="Check if the service is alive",
    tags=["Health"]
)
async def liveness_check():
    """Liveness check endpoint for container orchestration"""
    return {"status": "alive"}
