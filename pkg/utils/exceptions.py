"""
Custom exceptions for gazeforge.

Provides specific exception types for the failure modes of the toolkit
and the process exit code each one maps to in the CLI.
"""

from typing import Any, Optional

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_MISSING_INPUT = 3
EXIT_SCHEMA = 4
EXIT_INVARIANT = 5
EXIT_EMPTY = 6


class GazeForgeError(Exception):
    """Base exception for all gazeforge errors."""

    exit_code: int = EXIT_FAILURE

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        details: Optional[Any] = None,
    ):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.details = details


class ConfigurationError(GazeForgeError):
    """Exception raised for configuration that cannot be resolved."""

    exit_code = EXIT_MISSING_INPUT

    def __init__(self, message: str, missing: Optional[list] = None):
        super().__init__(message, error_code="CONFIG_ERROR", details=missing)
        self.missing = missing or []


class ConfigSchemaError(GazeForgeError):
    """Exception raised when a configuration document violates the schema."""

    exit_code = EXIT_SCHEMA

    def __init__(self, message: str, validation_errors: Optional[list] = None):
        super().__init__(
            message, error_code="CONFIG_SCHEMA_ERROR", details=validation_errors
        )
        self.validation_errors = validation_errors or []


class MissingInputError(GazeForgeError):
    """Exception raised when a referenced file does not exist."""

    exit_code = EXIT_MISSING_INPUT

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message, error_code="MISSING_INPUT", details={"path": path})
        self.path = path


class DataValidationError(GazeForgeError):
    """Exception raised for malformed or out-of-range data."""

    exit_code = EXIT_INVARIANT

    def __init__(self, message: str, validation_errors: Optional[list] = None):
        super().__init__(
            message, error_code="DATA_VALIDATION_ERROR", details=validation_errors
        )
        self.validation_errors = validation_errors or []


class ImageFormatError(DataValidationError):
    """Exception raised when an image or mask has the wrong shape or range."""

    def __init__(self, message: str, shape: Optional[tuple] = None):
        super().__init__(message, validation_errors=[{"shape": shape}])
        self.error_code = "IMAGE_FORMAT_ERROR"
        self.shape = shape


class DegenerateGeometryError(GazeForgeError):
    """Exception raised for singular geometric inputs.

    Covers polygons with fewer than three vertices or zero area, rigid fits
    on coincident points and gaze rays that never meet the screen plane.
    """

    exit_code = EXIT_INVARIANT

    def __init__(self, message: str, geometry: Optional[dict] = None):
        super().__init__(message, error_code="DEGENERATE_GEOMETRY", details=geometry)
        self.geometry = geometry or {}


class MissingLandmarksError(GazeForgeError):
    """Exception raised when required landmark IDs are absent."""

    exit_code = EXIT_INVARIANT

    def __init__(self, message: str, missing_ids: Optional[list] = None):
        super().__init__(message, error_code="MISSING_LANDMARKS", details=missing_ids)
        self.missing_ids = missing_ids or []


class InvariantViolationError(GazeForgeError):
    """Exception raised when an output fails one of its invariants."""

    exit_code = EXIT_INVARIANT

    def __init__(self, message: str, invariant: Optional[str] = None):
        super().__init__(
            message, error_code="INVARIANT_VIOLATION", details={"invariant": invariant}
        )
        self.invariant = invariant


class InsufficientDataError(GazeForgeError):
    """Exception raised when an operation needs more samples than it got."""

    exit_code = EXIT_EMPTY

    def __init__(self, message: str, required: int = 0, available: int = 0):
        super().__init__(
            message,
            error_code="INSUFFICIENT_DATA",
            details={"required": required, "available": available},
        )
        self.required = required
        self.available = available


class EmptyCellError(InsufficientDataError):
    """Exception raised when stratified planning meets empty (dataset, bin) cells."""

    def __init__(self, message: str, cells: Optional[list] = None):
        super().__init__(message, required=1, available=0)
        self.error_code = "EMPTY_CELL"
        self.cells = cells or []
        self.details = {"cells": self.cells}


class UsageError(GazeForgeError):
    """Exception raised for invalid command-line usage."""

    exit_code = EXIT_USAGE

    def __init__(self, message: str):
        super().__init__(message, error_code="USAGE_ERROR")
