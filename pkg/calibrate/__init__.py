"""
Training-free personalized calibration of screen-space gaze predictions.
"""

from .model import (
    CalibrationModel,
    GazePointPair,
    apply,
    fit_model,
    fit_npoint,
    fit_one_point,
    pair_arrays,
)
from .protocols import MpiiResult, RealGazeResult, mpii_protocol, realgaze_protocol
from .selection import anchor_locations, select_anchor_points, select_center_points

__all__ = [
    "CalibrationModel",
    "GazePointPair",
    "MpiiResult",
    "RealGazeResult",
    "anchor_locations",
    "apply",
    "fit_model",
    "fit_npoint",
    "fit_one_point",
    "mpii_protocol",
    "pair_arrays",
    "realgaze_protocol",
    "select_anchor_points",
    "select_center_points",
]
