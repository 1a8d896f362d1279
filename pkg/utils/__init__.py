"""
Utilities module for gazeforge.

Contains shared utilities including logging, error types,
seed derivation and run timing.
"""

from .exceptions import (
    ConfigSchemaError,
    ConfigurationError,
    DataValidationError,
    DegenerateGeometryError,
    EmptyCellError,
    GazeForgeError,
    ImageFormatError,
    InsufficientDataError,
    InvariantViolationError,
    MissingInputError,
    MissingLandmarksError,
    UsageError,
)
from .logging import get_logger, setup_logger
from .seeding import derive_seed, rng_for

__all__ = [
    "setup_logger",
    "get_logger",
    "derive_seed",
    "rng_for",
    "GazeForgeError",
    "ConfigurationError",
    "ConfigSchemaError",
    "DataValidationError",
    "DegenerateGeometryError",
    "EmptyCellError",
    "ImageFormatError",
    "InsufficientDataError",
    "InvariantViolationError",
    "MissingInputError",
    "MissingLandmarksError",
    "UsageError",
]
