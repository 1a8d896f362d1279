"""
Per-axis linear calibration of screen-space gaze predictions.

Each axis is corrected independently as ``corrected = slope * pred +
intercept``, with the ground truth regressed on the prediction. A single
calibration point fixes the intercepts only; two or more points fit both
slopes and intercepts by ordinary least squares.
"""

from dataclasses import dataclass
from typing import Literal, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from loguru import logger
from pydantic import BaseModel, ConfigDict, field_validator

from utils.exceptions import DataValidationError, InsufficientDataError

Point = Tuple[float, float]

# below this per-axis prediction variance (mm^2) the slope is not identifiable
MIN_VARIANCE = 1e-12


@dataclass(frozen=True)
class GazePointPair:
    """A predicted and a ground-truth point of gaze, in screen millimetres."""

    pred: Point
    gt: Point
    sample_id: str = ""
    subject: str = ""
    session: Optional[str] = None

    def __post_init__(self) -> None:
        values = np.asarray([*self.pred, *self.gt], dtype=np.float64)
        if values.shape != (4,) or not np.all(np.isfinite(values)):
            raise DataValidationError(
                f"Point pair {self.sample_id!r} must hold two finite 2-D points"
            )


def pair_arrays(
    pairs: Sequence[GazePointPair],
) -> Tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """(n, 2) predictions and (n, 2) ground truths."""
    pred = np.array([p.pred for p in pairs], dtype=np.float64).reshape(-1, 2)
    gt = np.array([p.gt for p in pairs], dtype=np.float64).reshape(-1, 2)
    return pred, gt


class CalibrationModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    slope: Tuple[float, float] = (1.0, 1.0)
    intercept: Tuple[float, float] = (0.0, 0.0)
    method: Literal["identity", "one_point", "n_point"] = "identity"
    n_points: int = 0
    fallback_axes: Tuple[str, ...] = ()

    @field_validator("slope")
    @classmethod
    def validate_slope(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        if not all(np.isfinite(s) and s != 0.0 for s in v):
            raise ValueError(f"slopes must be finite and nonzero, got {v}")
        return v

    @field_validator("intercept")
    @classmethod
    def validate_intercept(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        if not all(np.isfinite(b) for b in v):
            raise ValueError(f"intercepts must be finite, got {v}")
        return v

    @classmethod
    def identity(cls) -> "CalibrationModel":
        return cls()

    @property
    def is_identity(self) -> bool:
        return self.slope == (1.0, 1.0) and self.intercept == (0.0, 0.0)

    def apply(self, pred: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Correct one point or an (n, 2) batch."""
        p = np.asarray(pred, dtype=np.float64)
        return p * np.asarray(self.slope) + np.asarray(self.intercept)


def apply(model: CalibrationModel, pred: npt.ArrayLike) -> npt.NDArray[np.float64]:
    return model.apply(pred)


def fit_one_point(pair: GazePointPair) -> CalibrationModel:
    """Intercept-only model that maps ``pair.pred`` exactly onto ``pair.gt``."""
    return CalibrationModel(
        slope=(1.0, 1.0),
        intercept=(pair.gt[0] - pair.pred[0], pair.gt[1] - pair.pred[1]),
        method="one_point",
        n_points=1,
    )


def fit_npoint(pairs: Sequence[GazePointPair]) -> CalibrationModel:
    """Independent per-axis least squares of ground truth on prediction.

    An axis whose predictions are all identical, or whose fitted slope is
    zero, falls back to an intercept-only correction.
    """
    if len(pairs) < 2:
        raise InsufficientDataError(
            f"n-point calibration needs at least 2 pairs, got {len(pairs)}",
            required=2,
            available=len(pairs),
        )
    pred, gt = pair_arrays(pairs)
    slopes, intercepts, fallback = [], [], []
    for axis, name in enumerate(("x", "y")):
        x, y = pred[:, axis], gt[:, axis]
        dx = x - x.mean()
        var = float(np.mean(dx**2))
        slope = float(np.sum(dx * (y - y.mean())) / np.sum(dx**2)) if var >= MIN_VARIANCE else 0.0
        if var < MIN_VARIANCE or slope == 0.0:
            logger.warning(
                f"Degenerate {name} axis in {len(pairs)}-point calibration; "
                "fitting the intercept only"
            )
            fallback.append(name)
            slopes.append(1.0)
            intercepts.append(float(np.mean(y - x)))
        else:
            slopes.append(slope)
            intercepts.append(float(y.mean() - slope * x.mean()))

    return CalibrationModel(
        slope=(slopes[0], slopes[1]),
        intercept=(intercepts[0], intercepts[1]),
        method="n_point",
        n_points=len(pairs),
        fallback_axes=tuple(fallback),
    )


def fit_model(pairs: Sequence[GazePointPair]) -> CalibrationModel:
    """One-point rule for a single pair, least squares otherwise."""
    if not pairs:
        raise InsufficientDataError("No calibration pairs", required=1, available=0)
    return fit_one_point(pairs[0]) if len(pairs) == 1 else fit_npoint(pairs)
