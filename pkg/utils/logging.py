"""
Logging utilities for gazeforge.

Provides centralized logging setup and configuration using loguru.
"""

import sys
from pathlib import Path
from typing import Optional

from loguru import logger

LOG_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level} | {name}:{function}:{line} - {message}"


def setup_logger(
    name: str, log_file: Optional[Path] = None, level: Optional[str] = None
):
    """Set up and configure logger using loguru.

    Console output goes to stderr; stdout is reserved for ``--json``
    summaries.
    """
    if level is None:
        from config.settings import get_settings

        level = get_settings().log_level

    # Remove default handler
    logger.remove()

    logger.add(
        sys.stderr,
        format=LOG_FORMAT,
        level=level.upper(),
        colorize=True,
    )

    if log_file:
        # augment and annotate workers share this sink
        log_file.parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            log_file,
            format=LOG_FORMAT,
            level=level.upper(),
            rotation="10 MB",
            retention="7 days",
            compression="zip",
            enqueue=True,
        )

    return get_logger(name)


def get_logger(name: str):
    """Get a logger instance."""
    # Loguru uses a shared logger, so we just bind the name
    return logger.bind(name=name)
