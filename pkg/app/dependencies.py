"""FastAPI dependencies for dependency injection"""

from typing import Annotated, Optional
from fastapi import Depends
from loguru import logger

from .algebra.fpmod import clear_gb_cache, gb_cache_info
from .config import settings
from .services.toolkit_service import ToolkitService


# Global instances
_toolkit_service: Optional[ToolkitService] = None


async def get_toolkit_service() -> ToolkitService:
    """Get toolkit service instance"""
    global _toolkit_service
    if _toolkit_service is None:
        _toolkit_service = ToolkitService(settings)
    return _toolkit_service


# Application lifecycle management
async def initialize_dependencies():
    """Initialize all services and dependencies"""
    try:
        await get_toolkit_service()
        logger.info(f"Toolkit service initialized (cache size {settings.gb_cache_size})")
    except Exception as e:
        logger.error(f"Failed to initialize dependencies: {e}")
        raise


async def cleanup_dependencies():
    """Cleanup resources on application shutdown"""
    global _toolkit_service

    try:
        stats = gb_cache_info()
        clear_gb_cache()
        _toolkit_service = None
        logger.info(f"Dependencies cleaned up successfully (cache stats at shutdown: {stats})")
    except Exception as e:
        logger.error(f"Error during cleanup: {e}")


# Type aliases for cleaner imports
ToolkitServiceDep = Annotated[ToolkitService, Depends(get_toolkit_service)]
