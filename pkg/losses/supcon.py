"""
Supervised contrastive loss with an analytic gradient.

For unit features z and similarities s_ij = z_i . z_j / tau, the loss sums
over anchors i with at least one positive:

    -1/|P(i)| sum_{p in P(i)} s_ip + log sum_{q != i} exp(s_iq)

Anchors without positives contribute nothing. The gradient is returned
with respect to the features before normalization.
"""

from typing import Tuple

import numpy as np
import numpy.typing as npt

from losses.features import FeatureBatch
from losses.pair_masks import validate_mask
from utils.exceptions import DataValidationError


def supcon_raw(
    raw: npt.ArrayLike, mask: npt.ArrayLike, tau: float = 0.07
) -> Tuple[float, npt.NDArray[np.float64]]:
    """Loss and gradient for un-normalized feature rows."""
    v = np.asarray(raw, dtype=np.float64)
    if v.ndim != 2 or v.shape[0] < 2:
        raise DataValidationError(
            f"Contrastive loss needs at least 2 feature rows, got shape {v.shape}"
        )
    if tau <= 0:
        raise ValueError(f"temperature must be positive, got {tau}")
    n = v.shape[0]
    m = validate_mask(mask, n).astype(np.float64)

    norms = np.linalg.norm(v, axis=1, keepdims=True)
    if np.any(norms == 0.0):
        raise DataValidationError("Cannot normalize a zero feature vector")
    z = v / norms

    sim = z @ z.T / tau
    np.fill_diagonal(sim, -np.inf)
    row_max = sim.max(axis=1, keepdims=True)
    exp = np.exp(sim - row_max)
    denom = exp.sum(axis=1, keepdims=True)
    log_denom = np.log(denom) + row_max
    softmax = exp / denom

    n_pos = m.sum(axis=1)
    anchors = n_pos > 0
    if not np.any(anchors):
        return 0.0, np.zeros_like(v)

    sim_pos = np.where(m > 0, sim, 0.0).sum(axis=1)
    per_anchor = -sim_pos[anchors] / n_pos[anchors] + log_denom[anchors, 0]
    loss = float(per_anchor.sum())

    # dL/ds_ij for anchor rows; zero for rows without positives
    a = np.zeros_like(sim)
    a[anchors] = softmax[anchors] - m[anchors] / n_pos[anchors, None]
    g_z = (a + a.T) @ z / tau
    g_v = (g_z - np.sum(g_z * z, axis=1, keepdims=True) * z) / norms
    return loss, g_v


def supcon_loss(
    batch: FeatureBatch, mask: npt.ArrayLike, tau: float = 0.07
) -> Tuple[float, npt.NDArray[np.float64]]:
    """Loss over a unit-norm batch; gradient w.r.t. pre-normalized features."""
    return supcon_raw(batch.features, mask, tau)
