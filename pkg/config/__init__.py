"""
Configuration module for gazeforge.

Process settings from the environment and the JSON run configuration
holding every experiment constant.
"""

from .run_config import (
    DEFAULTS_FILE,
    SCHEMA_VERSION,
    RunConfig,
    dump_run_config,
    load_run_config,
    parse_run_config,
)
from .settings import Settings, get_settings, reset_settings

__all__ = [
    "DEFAULTS_FILE",
    "SCHEMA_VERSION",
    "RunConfig",
    "Settings",
    "dump_run_config",
    "get_settings",
    "load_run_config",
    "parse_run_config",
    "reset_settings",
]
