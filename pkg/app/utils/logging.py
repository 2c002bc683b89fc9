"""Structured logging with run tracing for decision procedures"""

import sys
import uuid
from typing import Optional, Dict, Any
from datetime import datetime
from contextvars import ContextVar
from loguru import logger

from ..config import settings

# Context variable for run/request tracing
run_id_ctx: ContextVar[Optional[str]] = ContextVar('run_id', default=None)


class StructuredLogger:
    """Structured logger with context awareness"""

    @staticmethod
    def get_run_id() -> Optional[str]:
        """Get current run ID from context"""
        return run_id_ctx.get()

    @staticmethod
    def set_run_context(run_id: str):
        """Set run context for logging"""
        run_id_ctx.set(run_id)

    @staticmethod
    def clear_run_context():
        """Clear run context"""
        run_id_ctx.set(None)

    @staticmethod
    def _add_context(extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """Add run context to log data"""
        context = {
            "run_id": run_id_ctx.get(),
            "timestamp": datetime.now().isoformat(),
            "service": settings.app_name,
            "version": settings.version,
            "environment": settings.environment
        }
        context = {k: v for k, v in context.items() if v is not None}

        if extra:
            context.update(extra)

        return context

    @staticmethod
    def info(message: str, **kwargs):
        """Log info message with context"""
        extra = StructuredLogger._add_context(kwargs)
        logger.bind(**extra).info(message)

    @staticmethod
    def debug(message: str, **kwargs):
        """Log debug message with context"""
        extra = StructuredLogger._add_context(kwargs)
        logger.bind(**extra).debug(message)

    @staticmethod
    def warning(message: str, **kwargs):
        """Log warning message with context"""
        extra = StructuredLogger._add_context(kwargs)
        logger.bind(**extra).warning(message)

    @staticmethod
    def error(message: str, error: Optional[Exception] = None, **kwargs):
        """Log error message with context"""
        extra = StructuredLogger._add_context(kwargs)

        if error:
            extra.update({
                "error_type": type(error).__name__,
                "error_message": str(error)
            })

        logger.bind(**extra).error(message)


class ComputationLogger:
    """Logger for decision-procedure and constructor calls"""

    @staticmethod
    def log_computation(
        procedure: str,
        operation: str,
        duration: Optional[float] = None,
        success: bool = True,
        error: Optional[str] = None,
        **kwargs
    ):
        """Log one call into the algebra layer"""
        log_data = {
            "event": "computation",
            "procedure": procedure,
            "operation": operation,
            "duration": duration,
            "success": success
        }

        if error:
            log_data["error_message"] = error

        log_data.update(kwargs)

        if success:
            StructuredLogger.info(f"{procedure}.{operation} completed", **log_data)
        else:
            StructuredLogger.error(f"{procedure}.{operation} failed", **log_data)


def generate_run_id() -> str:
    """Generate unique run ID"""
    return str(uuid.uuid4())


def setup_structured_logging(level: Optional[str] = None):
    """Install the loguru sinks described by settings; `level` overrides the configured level"""
    config = settings.log_config
    level = level or config["level"]
    logger.remove()

    if config["serialize"]:
        logger.add(sys.stderr, level=level, serialize=True)
    else:
        logger.add(
            sys.stderr,
            format=(
                "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
                "<level>{level: <8}</level> | "
                "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | "
                "<level>{message}</level>"
            ),
            level=level,
            colorize=True,
        )

    if config["file"]:
        logger.add(
            config["file"],
            rotation="100 MB",
            retention="30 days",
            level=level,
            serialize=config["serialize"],
        )


slog = StructuredLogger()
computation_logger = ComputationLogger()
