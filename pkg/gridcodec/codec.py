"""
Functional codec API over GridSpec plus the sharpened softmax.
"""

from typing import Tuple

import numpy as np
import numpy.typing as npt

from geometry.gaze import GazeAngles
from gridcodec.grid import Axis, GridSpec


def discretize(a: GazeAngles, grid: GridSpec) -> Tuple[int, int]:
    return grid.discretize(a)


def centroid(i: int, axis: Axis | str, grid: GridSpec) -> float:
    return grid.centroid(i, axis)


def decode_expectation(
    probs: npt.ArrayLike, axis: Axis | str, grid: GridSpec
) -> float | npt.NDArray[np.float64]:
    return grid.decode_expectation(probs, axis)


def sharpened_softmax(logits: npt.ArrayLike, tau: float = 0.5) -> npt.NDArray[np.float64]:
    """softmax(logits / tau) over the last axis, max-subtracted."""
    if tau <= 0:
        raise ValueError(f"softmax temperature must be positive, got {tau}")
    z = np.asarray(logits, dtype=np.float64) / tau
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)
