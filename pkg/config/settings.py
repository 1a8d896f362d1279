"""
Process settings for gazeforge.

Handles environment variable loading (``GAZEFORGE_`` prefix, optional
``.env`` file) and provides centralized access to process-level options.
Experiment constants live in the run configuration, not here.
"""

from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from utils.exceptions import ConfigurationError

LOG_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")


class Settings(BaseSettings):
    """Process settings with environment variable support."""

    model_config = SettingsConfigDict(
        env_prefix="GAZEFORGE_", env_file=".env", case_sensitive=False, extra="ignore"
    )

    config: Optional[Path] = Field(default=None, description="Run configuration file")
    log_level: str = Field(default="INFO", description="Logging level")
    log_file: Optional[Path] = Field(default=None, description="Optional log file")
    workers: int = Field(default=1, ge=1, description="Default worker processes")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"log_level must be one of {', '.join(LOG_LEVELS)}")
        return level

    def __str__(self) -> str:
        return (
            f"Settings(config='{self.config}', log_level='{self.log_level}', "
            f"log_file='{self.log_file}', workers={self.workers})"
        )


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get the global settings instance, creating it if necessary."""
    global _settings
    if _settings is None:
        load_dotenv()
        try:
            _settings = Settings()
        except ValidationError as e:
            problems = [f"{'.'.join(str(x) for x in err['loc'])}: {err['msg']}" for err in e.errors()]
            raise ConfigurationError(
                f"Invalid GAZEFORGE_ environment settings: {'; '.join(problems)}",
                missing=problems,
            ) from e
    return _settings


def reset_settings() -> None:
    """Drop the cached instance so the next call re-reads the environment."""
    global _settings
    _settings = None
