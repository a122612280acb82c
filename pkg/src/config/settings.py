import os
from typing import Optional
import logging

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

logger = logging.getLogger(__name__)

ENV_PREFIX = "CLIPRESCALE_"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

# Global settings instance
_settings = None


class Settings(BaseModel):
    """Runtime defaults, overridable through CLIPRESCALE_* environment variables or a .env file"""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    log_level: str = "INFO"
    default_p: float = Field(2.0, ge=1.0)
    default_min: float = 0.0
    default_max: float = 1.0
    bisect_tol: float = Field(1e-12, gt=0)
    bisect_max_iter: int = Field(200, gt=0)
    breakpoint_tol: float = Field(1e-9, ge=0)
    workers: int = Field(1, ge=1)

    @field_validator('log_level')
    @classmethod
    def known_log_level(cls, value: str) -> str:
        level = value.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"log_level must be one of {', '.join(LOG_LEVELS)}")
        return level


def load_settings(env_file: Optional[str] = None) -> Settings:
    """
    Build settings from the environment

    Args:
        env_file: path of a .env file. If None, python-dotenv searches upward from the working directory
    """
    load_dotenv(env_file)
    values = {}
    for name in Settings.model_fields:
        raw = os.getenv(ENV_PREFIX + name.upper())
        if raw is not None:
            values[name] = raw
    try:
        return Settings(**values)
    except ValidationError as e:
        logger.error(f"Invalid {ENV_PREFIX}* configuration: {str(e)}")
        raise


def get_settings() -> Settings:
    """Get the global settings instance"""
    global _settings
    if _settings is None:
        _settings = load_settings()
    return _settings


def reset_settings():
    """Forget the cached settings so the next get_settings() reloads them"""
    global _settings
    _settings = None
