"""
Prediction records consumed by the evaluation reports.

A record carries whatever a prediction file provides: screen points in
millimetres, gaze angles in degrees, or both. ZeroGaze rows additionally
carry a view tag, a triplet id and an optional head pose.
"""

from dataclasses import dataclass
from typing import Literal, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from utils.exceptions import DataValidationError

View = Literal["clean", "glasses", "mask"]
VIEWS: Tuple[str, ...] = ("clean", "glasses", "mask")

Pair = Tuple[float, float]


def _finite(name: str, value: Optional[Sequence[float]]) -> None:
    if value is not None and not np.all(np.isfinite(np.asarray(value, dtype=np.float64))):
        raise DataValidationError(f"{name} must be finite, got {value}")


@dataclass(frozen=True)
class PredictionRecord:
    """One evaluated sample."""

    sample_id: str
    subject: str = ""
    session: Optional[str] = None
    pred_pog: Optional[Pair] = None
    gt_pog: Optional[Pair] = None
    pred_angles: Optional[Pair] = None
    gt_angles: Optional[Pair] = None
    view: Optional[str] = None
    triplet_id: Optional[str] = None
    head_pose: Optional[Tuple[float, float, float]] = None

    def __post_init__(self) -> None:
        for name in ("pred_pog", "gt_pog", "pred_angles", "gt_angles", "head_pose"):
            _finite(name, getattr(self, name))
        if self.view is not None and self.view not in VIEWS:
            raise DataValidationError(f"Unknown view {self.view!r}; expected one of {VIEWS}")


def stack(records: Sequence[PredictionRecord], attr: str) -> npt.NDArray[np.float64]:
    """(n, 2) array of one pair attribute; raises if any record lacks it."""
    missing = [r.sample_id for r in records if getattr(r, attr) is None]
    if missing:
        raise DataValidationError(
            f"{len(missing)} record(s) have no {attr}", validation_errors=missing[:10]
        )
    return np.array([getattr(r, attr) for r in records], dtype=np.float64).reshape(-1, 2)
