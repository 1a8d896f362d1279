"""
Positive-pair mask builders for the contrastive terms.

Every mask is an N x N boolean matrix, symmetric with a zero diagonal.
"""

from typing import Literal

import numpy as np
import numpy.typing as npt

from geometry.gaze import clamp_angles
from gridcodec.grid import GridSpec
from losses.features import FeatureBatch
from utils.exceptions import InvariantViolationError

PairMask = npt.NDArray[np.bool_]
Accessory = Literal["glasses", "mask"]

PITCH_TOLERANCE = 1e-12


def _finish(m: npt.NDArray[np.bool_]) -> PairMask:
    out = np.asarray(m, dtype=bool).copy()
    np.fill_diagonal(out, False)
    return out


def validate_mask(mask: npt.ArrayLike, n: int) -> PairMask:
    """Check shape, symmetry and the empty diagonal."""
    m = np.asarray(mask, dtype=bool)
    if m.shape != (n, n):
        raise InvariantViolationError(
            f"Pair mask must be {n}x{n}, got {m.shape}", invariant="mask_shape"
        )
    if not np.array_equal(m, m.T):
        raise InvariantViolationError("Pair mask must be symmetric", invariant="symmetry")
    if np.any(np.diag(m)):
        raise InvariantViolationError(
            "Pair mask diagonal must be empty", invariant="zero_diagonal"
        )
    return m


def build_pitch_mask(batch: FeatureBatch, s_pitch: float) -> PairMask:
    """Positives: pitch labels within ``s_pitch`` of each other."""
    pitch = batch.labels[:, 0]
    diff = np.abs(pitch[:, None] - pitch[None, :])
    return _finish(diff <= s_pitch + PITCH_TOLERANCE)


def build_dataset_mask(batch: FeatureBatch, grid: GridSpec) -> PairMask:
    """Positives: different source datasets sharing a gaze bin."""
    ids = np.array(batch.dataset_ids)
    if len(ids) == 0:
        return np.zeros((0, 0), dtype=bool)
    bins = grid.discretize_many(clamp_angles(batch.labels, grid.interval))
    same_bin = np.all(bins[:, None, :] == bins[None, :, :], axis=2)
    different_source = ids[:, None] != ids[None, :]
    return _finish(same_bin & different_source)


def build_accessory_mask(batch: FeatureBatch, which: Accessory) -> PairMask:
    """Positives: views of the same sample whose accessory flag differs."""
    ids = np.array(batch.sample_ids)
    flags = batch.flags(which)
    same_sample = ids[:, None] == ids[None, :]
    return _finish(same_sample & (flags[:, None] != flags[None, :]))
