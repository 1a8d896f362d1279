"""
Per-sample loss kernels: cross-entropy over gaze bins, L1 regression and
Dice segmentation.
"""

from typing import Literal, Optional, Tuple

import numpy as np
import numpy.typing as npt

from geometry.gaze import GazeAngles
from gridcodec.codec import sharpened_softmax
from imgcore.types import require_same_shape
from utils.exceptions import DataValidationError

L1Axes = Literal["both", "yaw_only", "pitch_only"]

DICE_EPS = 1e-6
PROB_FLOOR = 1e-300


def _check_probs(p: npt.NDArray[np.float64]) -> None:
    if np.any(p < -1e-12) or abs(float(p.sum()) - 1.0) > 1e-4:
        raise DataValidationError("Bin probabilities must be non-negative and sum to 1")


def ce_loss(
    probs: npt.ArrayLike, target: int, tau: float = 1.0
) -> Tuple[float, npt.NDArray[np.float64]]:
    """-log p[target] and its gradient w.r.t. the logits.

    ``probs`` must be softmax(logits / tau); the gradient is (p - y) / tau.
    """
    p = np.asarray(probs, dtype=np.float64).ravel()
    _check_probs(p)
    if not 0 <= target < len(p):
        raise DataValidationError(f"Target bin {target} out of range [0, {len(p)})")
    y = np.zeros_like(p)
    y[target] = 1.0
    loss = float(-np.log(max(p[target], PROB_FLOOR)))
    return loss, (p - y) / tau


def ce_from_logits(
    logits: npt.ArrayLike, target: int, tau: float = 0.5
) -> Tuple[float, npt.NDArray[np.float64]]:
    return ce_loss(sharpened_softmax(logits, tau), target, tau)


def _as_pairs(a: GazeAngles | npt.ArrayLike) -> npt.NDArray[np.float64]:
    if isinstance(a, GazeAngles):
        return np.array([a.as_tuple()])
    return np.asarray(a, dtype=np.float64).reshape(-1, 2)


def l1_loss(
    pred: GazeAngles | npt.ArrayLike,
    gt: GazeAngles | npt.ArrayLike,
    axes: L1Axes = "both",
    pitch_mask: Optional[npt.ArrayLike] = None,
) -> float:
    """Mean absolute error over the selected axes.

    Rows where ``pitch_mask`` is False contribute zero pitch error but still
    count in the denominator.
    """
    p, g = _as_pairs(pred), _as_pairs(gt)
    if p.shape != g.shape:
        raise DataValidationError(f"Prediction/label shapes differ: {p.shape} vs {g.shape}")
    diff = np.abs(p - g)
    if pitch_mask is not None:
        keep = np.asarray(pitch_mask, dtype=bool).reshape(-1)
        if keep.shape[0] != diff.shape[0]:
            raise DataValidationError(
                f"Pitch mask has {keep.shape[0]} rows, expected {diff.shape[0]}"
            )
        diff[~keep, 0] = 0.0
    if axes == "both":
        return float(diff.mean())
    if axes == "yaw_only":
        return float(diff[:, 1].mean())
    if axes == "pitch_only":
        return float(diff[:, 0].mean())
    raise ValueError(f"Unknown axes selection {axes!r}")


def dice_loss_and_grad(
    pred: npt.ArrayLike, gt: npt.ArrayLike, eps: float = DICE_EPS
) -> Tuple[float, npt.NDArray[np.float64]]:
    """Soft Dice loss 1 - (2I + eps) / (S + eps) and its gradient w.r.t. pred."""
    p = np.asarray(pred, dtype=np.float64)
    g = np.asarray(gt, dtype=np.float64)
    require_same_shape(p, g, "prediction and ground-truth masks")
    if p.shape != g.shape:
        raise DataValidationError(f"Mask shapes differ: {p.shape} vs {g.shape}")
    inter = float(np.sum(p * g))
    total = float(p.sum() + g.sum()) + eps
    loss = 1.0 - (2.0 * inter + eps) / total
    grad = -(2.0 * g * total - (2.0 * inter + eps)) / total**2
    return loss, grad


def dice_loss(pred: npt.ArrayLike, gt: npt.ArrayLike, eps: float = DICE_EPS) -> float:
    return dice_loss_and_grad(pred, gt, eps)[0]
