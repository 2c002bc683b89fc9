from pydantic import ValidationInfo, field_validator
from pydantic_settings import BaseSettings
from typing import Optional, List, Tuple

from .utils.errors import ConfigurationError
from .utils.validators import parse_probe_list


class Settings(BaseSettings):
    """Application settings for the toolkit, the CLI and the HTTP surface"""

    # API Settings
    app_name: str = "ABC Group Toolkit"
    version: str = "1.0.0"
    debug: bool = False
    environment: str = "production"  # development, staging, production

    # Server Settings
    host: str = "0.0.0.0"
    port: int = 8000

    # Groebner engine
    gb_step_budget: int = 10_000_000
    gb_cache_size: int = 256

    # Monomial solver defaults
    search_bound: int = 64
    probe_list: str = "2:3,3:4,5:6,2:8,7:5"
    probe_search_cap: int = 4096

    # Monitoring & Observability
    enable_metrics: bool = True
    log_level: str = "INFO"
    structured_logging: bool = False
    log_file: Optional[str] = None

    # Feature Flags
    enable_swagger: bool = True
    enable_redoc: bool = True
    enable_openapi: bool = True

    @field_validator("probe_list")
    @classmethod
    def check_probe_list(cls, v: str) -> str:
        parse_probe_list(v)
        return v

    @field_validator("search_bound", "probe_search_cap", "gb_step_budget")
    @classmethod
    def check_positive(cls, v: int, info: ValidationInfo) -> int:
        if v < 1:
            raise ConfigurationError(f"{info.field_name} must be at least 1, got {v}", info.field_name)
        return v

    @property
    def is_development(self) -> bool:
        """Check if running in development mode"""
        return self.environment == "development" or self.debug

    @property
    def default_probes(self) -> List[Tuple[int, int]]:
        """Probe list parsed into (q, r) pairs"""
        return parse_probe_list(self.probe_list)

    @property
    def log_config(self) -> dict:
        """Get logging configuration"""
        return {
            "level": self.log_level,
            "serialize": self.structured_logging,
            "file": self.log_file,
        }

    class Config:
        env_file = ".env"
        case_sensitive = False
        env_prefix = ""


# Global settings instance
settings = Settings()
