"""
Discretized gaze label grid.

The gaze interval is partitioned per axis into equal bins. Bin indices are
0-based: bin ``i`` covers [min + i*s, min + (i+1)*s) and its centroid is
min + (i + 1/2)*s. The upper interval boundary belongs to the last bin.
"""

from enum import Enum
from typing import Tuple

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, model_validator

from geometry.gaze import GazeAngles, GazeInterval
from utils.exceptions import DataValidationError

BOUNDARY_TOLERANCE = 1e-9
NORMALIZATION_TOLERANCE = 1e-4


class Axis(str, Enum):
    PITCH = "pitch"
    YAW = "yaw"


class GridSpec(BaseModel):
    """Per-axis bin partition of a gaze interval."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    interval: GazeInterval = Field(default_factory=GazeInterval)
    bin_size_pitch: float = Field(default=4.0, gt=0, description="Nominal degrees")
    bin_size_yaw: float = Field(default=4.0, gt=0, description="Nominal degrees")
    softmax_temperature: float = Field(default=0.5, gt=0)

    @model_validator(mode="after")
    def validate_bins(self) -> "GridSpec":
        for width, size in (
            (self.interval.pitch_width, self.bin_size_pitch),
            (self.interval.yaw_width, self.bin_size_yaw),
        ):
            if round(width / size) < 1:
                raise ValueError(f"bin size {size} exceeds interval width {width}")
        return self

    @property
    def n_pitch(self) -> int:
        return int(round(self.interval.pitch_width / self.bin_size_pitch))

    @property
    def n_yaw(self) -> int:
        return int(round(self.interval.yaw_width / self.bin_size_yaw))

    @property
    def n_bins(self) -> int:
        return self.n_pitch * self.n_yaw

    @property
    def s_pitch(self) -> float:
        """Effective pitch bin size, width / n_pitch."""
        return self.interval.pitch_width / self.n_pitch

    @property
    def s_yaw(self) -> float:
        return self.interval.yaw_width / self.n_yaw

    def _axis(self, axis: Axis | str) -> Tuple[float, float, int]:
        axis = Axis(axis)
        if axis is Axis.PITCH:
            return self.interval.pitch_min, self.s_pitch, self.n_pitch
        return self.interval.yaw_min, self.s_yaw, self.n_yaw

    def size(self, axis: Axis | str) -> int:
        return self._axis(axis)[2]

    def discretize_many(self, angles: npt.ArrayLike) -> npt.NDArray[np.int64]:
        """Bin an (n, 2) array of (pitch, yaw); rejects out-of-interval rows."""
        a = np.asarray(angles, dtype=np.float64).reshape(-1, 2)
        iv = self.interval
        outside = (
            (a[:, 0] < iv.pitch_min - BOUNDARY_TOLERANCE)
            | (a[:, 0] > iv.pitch_max + BOUNDARY_TOLERANCE)
            | (a[:, 1] < iv.yaw_min - BOUNDARY_TOLERANCE)
            | (a[:, 1] > iv.yaw_max + BOUNDARY_TOLERANCE)
            | ~np.all(np.isfinite(a), axis=1)
        )
        if np.any(outside):
            rows = np.flatnonzero(outside)
            raise DataValidationError(
                f"{len(rows)} gaze label(s) outside the grid interval; clamp first",
                validation_errors=[
                    {"row": int(r), "pitch": float(a[r, 0]), "yaw": float(a[r, 1])}
                    for r in rows[:10]
                ],
            )
        c_pitch = np.floor((a[:, 0] - iv.pitch_min) / self.s_pitch).astype(np.int64)
        c_yaw = np.floor((a[:, 1] - iv.yaw_min) / self.s_yaw).astype(np.int64)
        return np.column_stack(
            [np.clip(c_pitch, 0, self.n_pitch - 1), np.clip(c_yaw, 0, self.n_yaw - 1)]
        )

    def discretize(self, a: GazeAngles) -> Tuple[int, int]:
        c = self.discretize_many([a.as_tuple()])[0]
        return int(c[0]), int(c[1])

    def centroid(self, i: int, axis: Axis | str) -> float:
        lo, s, n = self._axis(axis)
        if not 0 <= i < n:
            raise IndexError(f"bin index {i} out of range [0, {n}) on {Axis(axis).value}")
        return lo + (i + 0.5) * s

    def centroids(self, axis: Axis | str) -> npt.NDArray[np.float64]:
        lo, s, n = self._axis(axis)
        return lo + (np.arange(n) + 0.5) * s

    def bin_index(self, c_pitch: int, c_yaw: int) -> int:
        """Flatten (c_pitch, c_yaw) into a joint cell index."""
        if not (0 <= c_pitch < self.n_pitch and 0 <= c_yaw < self.n_yaw):
            raise IndexError(f"cell ({c_pitch}, {c_yaw}) outside the grid")
        return c_pitch * self.n_yaw + c_yaw

    def bin_of_index(self, k: int) -> Tuple[int, int]:
        if not 0 <= k < self.n_bins:
            raise IndexError(f"cell index {k} out of range [0, {self.n_bins})")
        return divmod(k, self.n_yaw)

    def one_hot(self, i: int, axis: Axis | str) -> npt.NDArray[np.float64]:
        n = self.size(axis)
        if not 0 <= i < n:
            raise IndexError(f"bin index {i} out of range [0, {n})")
        p = np.zeros(n)
        p[i] = 1.0
        return p

    def decode_expectation(
        self, probs: npt.ArrayLike, axis: Axis | str
    ) -> float | npt.NDArray[np.float64]:
        """Expected angle under per-bin probabilities.

        Accepts a single vector or an (m, n) batch.
        """
        p = np.asarray(probs, dtype=np.float64)
        n = self.size(axis)
        if p.shape[-1] != n:
            raise DataValidationError(
                f"Expected {n} {Axis(axis).value} probabilities, got {p.shape[-1]}"
            )
        if np.any(p < -1e-12):
            raise DataValidationError("Bin probabilities must be non-negative")
        sums = p.sum(axis=-1)
        if np.any(np.abs(sums - 1.0) > NORMALIZATION_TOLERANCE):
            raise DataValidationError(
                f"Bin probabilities must sum to 1 (got {np.ravel(sums)[:5].tolist()})"
            )
        out = p @ self.centroids(axis)
        return float(out) if p.ndim == 1 else out
