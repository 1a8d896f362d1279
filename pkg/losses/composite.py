"""
Composite multi-task objective.

    L = L_reg + l_clf L_clf + l_seg L_seg + l_D S_D + l_phi S_phi + l_g S_g + l_m S_m

Regression is the L1 kernel over all 2n angle entries; its reported pitch
and yaw parts sum to it. Classification is the per-axis sum of batch-mean
cross-entropies. Pitch rows from the N and C datasets contribute zero to
both (their yaw rows are kept). Segmentation averages Dice over valid
(row, mask) pairs only.
"""

from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence

import numpy as np
import numpy.typing as npt

from geometry.gaze import clamp_angles
from gridcodec.grid import Axis, GridSpec
from losses.features import FeatureBatch, FeatureMeta
from losses.kernels import ce_loss, dice_loss, l1_loss
from losses.pair_masks import (
    PairMask,
    build_accessory_mask,
    build_dataset_mask,
    build_pitch_mask,
)
from losses.supcon import supcon_raw
from losses.weights import LossWeights
from utils.exceptions import DataValidationError

ATTENUATED_PITCH_DATASETS = frozenset({"N", "C"})

# contrastive head name -> weight attribute
SUPCON_TERMS: Dict[str, str] = {
    "dataset": "lambda_D",
    "pitch": "lambda_phi",
    "glasses": "lambda_g",
    "mask": "lambda_m",
}


@dataclass(frozen=True)
class ModelOutputs:
    """Network outputs for one batch.

    ``pred`` defaults to the expectation over bin centroids.
    """

    probs_pitch: npt.NDArray[np.float64]
    probs_yaw: npt.NDArray[np.float64]
    pred: Optional[npt.NDArray[np.float64]] = None
    seg: Optional[npt.NDArray[np.float64]] = None
    features: Mapping[str, npt.NDArray[np.float64]] = field(default_factory=dict)


@dataclass(frozen=True)
class LossTargets:
    """Labels for one batch; ``seg_valid`` marks usable masks."""

    meta: Sequence[FeatureMeta]
    seg: Optional[npt.NDArray[np.bool_]] = None
    seg_valid: Optional[npt.NDArray[np.bool_]] = None


@dataclass
class CompositeLoss:
    total: float
    terms: Dict[str, float]
    weighted: Dict[str, float]


def build_term_mask(
    term: str, batch: FeatureBatch, grid: GridSpec
) -> PairMask:
    if term == "dataset":
        return build_dataset_mask(batch, grid)
    if term == "pitch":
        return build_pitch_mask(batch, grid.s_pitch)
    if term in ("glasses", "mask"):
        return build_accessory_mask(batch, term)  # type: ignore[arg-type]
    raise ValueError(f"Unknown contrastive term {term!r}")


def supcon_terms(
    features: Mapping[str, npt.ArrayLike],
    meta: Sequence[FeatureMeta],
    grid: GridSpec,
    weights: LossWeights,
) -> Dict[str, float]:
    """Evaluate each contrastive term whose head features are present."""
    labels = FeatureBatch.labels_only(meta)
    out: Dict[str, float] = {}
    for term in SUPCON_TERMS:
        if term not in features:
            continue
        mask = build_term_mask(term, labels, grid)
        out[term], _ = supcon_raw(features[term], mask, weights.tau_s)
    return out


def _segmentation(outputs: ModelOutputs, targets: LossTargets, n: int) -> float:
    if outputs.seg is None or targets.seg is None:
        return 0.0
    pred = np.asarray(outputs.seg, dtype=np.float64)
    gt = np.asarray(targets.seg, dtype=bool)
    if pred.shape != gt.shape or pred.shape[0] != n:
        raise DataValidationError(
            f"Segmentation shapes differ: {pred.shape} vs {gt.shape}"
        )
    valid = (
        np.ones(pred.shape[:2], dtype=bool)
        if targets.seg_valid is None
        else np.asarray(targets.seg_valid, dtype=bool)
    )
    losses = [
        dice_loss(pred[i, k], gt[i, k])
        for i in range(pred.shape[0])
        for k in range(pred.shape[1])
        if valid[i, k]
    ]
    return float(np.mean(losses)) if losses else 0.0


def composite_loss(
    outputs: ModelOutputs,
    targets: LossTargets,
    weights: LossWeights,
    grid: GridSpec,
) -> CompositeLoss:
    meta = list(targets.meta)
    n = len(meta)
    if n == 0:
        raise DataValidationError("Composite loss needs a non-empty batch")
    probs_p = np.asarray(outputs.probs_pitch, dtype=np.float64).reshape(n, -1)
    probs_y = np.asarray(outputs.probs_yaw, dtype=np.float64).reshape(n, -1)
    if probs_p.shape[1] != grid.n_pitch or probs_y.shape[1] != grid.n_yaw:
        raise DataValidationError(
            f"Expected {grid.n_pitch}/{grid.n_yaw} bin probabilities, "
            f"got {probs_p.shape[1]}/{probs_y.shape[1]}"
        )

    labels = FeatureBatch.labels_only(meta).labels
    if outputs.pred is None:
        pred = np.column_stack(
            [
                grid.decode_expectation(probs_p, Axis.PITCH),
                grid.decode_expectation(probs_y, Axis.YAW),
            ]
        )
    else:
        pred = np.asarray(outputs.pred, dtype=np.float64).reshape(n, 2)

    keep_pitch = np.array([m.dataset_id not in ATTENUATED_PITCH_DATASETS for m in meta])
    bins = grid.discretize_many(clamp_angles(labels, grid.interval))

    ce_pitch = np.array([ce_loss(probs_p[i], int(bins[i, 0]))[0] for i in range(n)])
    ce_yaw = np.array([ce_loss(probs_y[i], int(bins[i, 1]))[0] for i in range(n)])

    terms: Dict[str, float] = {
        "reg": l1_loss(pred, labels, "both", pitch_mask=keep_pitch),
        "reg_pitch": 0.5 * l1_loss(pred, labels, "pitch_only", pitch_mask=keep_pitch),
        "reg_yaw": 0.5 * l1_loss(pred, labels, "yaw_only"),
        "clf_pitch": float(np.sum(ce_pitch[keep_pitch]) / n),
        "clf_yaw": float(np.mean(ce_yaw)),
        "seg": _segmentation(outputs, targets, n),
    }
    terms["clf"] = terms["clf_pitch"] + terms["clf_yaw"]

    contrastive = supcon_terms(outputs.features, meta, grid, weights)
    for term in SUPCON_TERMS:
        terms[f"supcon_{term}"] = contrastive.get(term, 0.0)

    weighted = {
        "reg": terms["reg"],
        "clf": weights.lambda_clf * terms["clf"],
        "seg": weights.lambda_seg * terms["seg"],
    }
    for term, attr in SUPCON_TERMS.items():
        weighted[f"supcon_{term}"] = getattr(weights, attr) * terms[f"supcon_{term}"]

    return CompositeLoss(total=float(sum(weighted.values())), terms=terms, weighted=weighted)
