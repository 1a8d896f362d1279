"""
Gaze direction representations.

Angles are in degrees: positive pitch looks up, positive yaw looks to the
subject's left. The unit vector form points from the eye towards the
target in camera coordinates, so zero gaze is (0, 0, -1):

    g = (-cos(pitch) sin(yaw), -sin(pitch), -cos(pitch) cos(yaw))
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, model_validator

from utils.exceptions import DataValidationError

UNIT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class GazeAngles:
    """Pitch and yaw in degrees."""

    pitch: float
    yaw: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.pitch) and np.isfinite(self.yaw)):
            raise DataValidationError(
                f"Gaze angles must be finite, got ({self.pitch}, {self.yaw})"
            )

    def as_tuple(self) -> Tuple[float, float]:
        return (self.pitch, self.yaw)


@dataclass(frozen=True)
class GazeVector:
    """Unit 3-vector gaze direction."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        norm = float(np.sqrt(self.x**2 + self.y**2 + self.z**2))
        if abs(norm - 1.0) > UNIT_TOLERANCE:
            raise DataValidationError(f"Gaze vector is not unit length (norm {norm})")

    @classmethod
    def from_array(cls, v: npt.ArrayLike) -> "GazeVector":
        """Normalize an arbitrary non-zero 3-vector."""
        arr = np.asarray(v, dtype=np.float64).reshape(3)
        norm = float(np.linalg.norm(arr))
        if norm == 0.0 or not np.isfinite(norm):
            raise DataValidationError("Cannot normalize a zero-length gaze vector")
        arr = arr / norm
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))

    def as_array(self) -> npt.NDArray[np.float64]:
        return np.array([self.x, self.y, self.z])


class GazeInterval(BaseModel):
    """Rectangular region of (pitch, yaw) space, in degrees."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    pitch_min: float = Field(default=-30.0, description="Lower pitch bound")
    pitch_max: float = Field(default=14.0, description="Upper pitch bound")
    yaw_min: float = Field(default=-26.0, description="Lower yaw bound")
    yaw_max: float = Field(default=26.0, description="Upper yaw bound")

    @model_validator(mode="after")
    def validate_bounds(self) -> "GazeInterval":
        if not self.pitch_min < self.pitch_max:
            raise ValueError("pitch_min must be smaller than pitch_max")
        if not self.yaw_min < self.yaw_max:
            raise ValueError("yaw_min must be smaller than yaw_max")
        return self

    @classmethod
    def head_pose_default(cls) -> "GazeInterval":
        return cls(pitch_min=-30.0, pitch_max=30.0, yaw_min=-30.0, yaw_max=30.0)

    @property
    def pitch_width(self) -> float:
        return self.pitch_max - self.pitch_min

    @property
    def yaw_width(self) -> float:
        return self.yaw_max - self.yaw_min

    def contains(self, a: GazeAngles, tol: float = 0.0) -> bool:
        return (
            self.pitch_min - tol <= a.pitch <= self.pitch_max + tol
            and self.yaw_min - tol <= a.yaw <= self.yaw_max + tol
        )


def pitchyaw_to_vectors(angles: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Convert an (n, 2) array of (pitch, yaw) degrees to (n, 3) unit vectors."""
    a = np.deg2rad(np.asarray(angles, dtype=np.float64).reshape(-1, 2))
    pitch, yaw = a[:, 0], a[:, 1]
    return np.column_stack(
        [
            -np.cos(pitch) * np.sin(yaw),
            -np.sin(pitch),
            -np.cos(pitch) * np.cos(yaw),
        ]
    )


def vectors_to_pitchyaw(vectors: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Convert (n, 3) vectors (any non-zero length) to (n, 2) degrees."""
    v = np.asarray(vectors, dtype=np.float64).reshape(-1, 3)
    norms = np.linalg.norm(v, axis=1)
    if np.any(norms == 0.0):
        raise DataValidationError("Cannot convert a zero-length gaze vector")
    v = v / norms[:, None]
    pitch = np.arcsin(np.clip(-v[:, 1], -1.0, 1.0))
    yaw = np.arctan2(-v[:, 0], -v[:, 2])
    return np.rad2deg(np.column_stack([pitch, yaw]))


def angles_to_vector(a: GazeAngles) -> GazeVector:
    v = pitchyaw_to_vectors([a.as_tuple()])[0]
    return GazeVector(float(v[0]), float(v[1]), float(v[2]))


def vector_to_angles(g: GazeVector | npt.ArrayLike) -> GazeAngles:
    raw = g.as_array() if isinstance(g, GazeVector) else g
    pitch, yaw = vectors_to_pitchyaw(raw)[0]
    return GazeAngles(float(pitch), float(yaw))


def angular_errors(
    a: npt.ArrayLike, b: npt.ArrayLike, *, vectors: bool = False
) -> npt.NDArray[np.float64]:
    """Per-row angle in degrees between two gaze batches.

    Inputs are (n, 2) pitch/yaw degrees, or (n, 3) vectors with
    ``vectors=True``.
    """
    if vectors:
        va = np.asarray(a, dtype=np.float64).reshape(-1, 3)
        vb = np.asarray(b, dtype=np.float64).reshape(-1, 3)
        va = va / np.linalg.norm(va, axis=1, keepdims=True)
        vb = vb / np.linalg.norm(vb, axis=1, keepdims=True)
    else:
        va, vb = pitchyaw_to_vectors(a), pitchyaw_to_vectors(b)
    dots = np.clip(np.sum(va * vb, axis=1), -1.0, 1.0)
    return np.rad2deg(np.arccos(dots))


def angular_error(g1: GazeVector, g2: GazeVector) -> float:
    """Angle between two gaze vectors, in degrees."""
    return float(angular_errors(g1.as_array(), g2.as_array(), vectors=True)[0])


def clamp_angles(angles: npt.ArrayLike, interval: GazeInterval) -> npt.NDArray[np.float64]:
    """Vectorized componentwise clamp of (n, 2) pitch/yaw degrees."""
    a = np.asarray(angles, dtype=np.float64).reshape(-1, 2)
    return np.column_stack(
        [
            np.clip(a[:, 0], interval.pitch_min, interval.pitch_max),
            np.clip(a[:, 1], interval.yaw_min, interval.yaw_max),
        ]
    )


def clamp_to_interval(a: GazeAngles, interval: GazeInterval) -> GazeAngles:
    return GazeAngles(
        float(np.clip(a.pitch, interval.pitch_min, interval.pitch_max)),
        float(np.clip(a.yaw, interval.yaw_min, interval.yaw_max)),
    )
