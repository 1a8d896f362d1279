"""
Loss kernels for the multi-task gaze objective.

Supervised contrastive loss with its pair-mask builders, cross-entropy over
gaze bins, L1 regression, Dice segmentation and the weighted composite,
plus finite-difference gradient checking.
"""

from .composite import (
    CompositeLoss,
    LossTargets,
    ModelOutputs,
    build_term_mask,
    composite_loss,
    supcon_terms,
)
from .features import FeatureBatch, FeatureMeta, normalize_rows
from .gradcheck import grad_check
from .kernels import ce_from_logits, ce_loss, dice_loss, dice_loss_and_grad, l1_loss
from .pair_masks import (
    build_accessory_mask,
    build_dataset_mask,
    build_pitch_mask,
    validate_mask,
)
from .supcon import supcon_loss, supcon_raw
from .weights import LossWeights

__all__ = [
    "CompositeLoss",
    "FeatureBatch",
    "FeatureMeta",
    "LossTargets",
    "LossWeights",
    "ModelOutputs",
    "build_accessory_mask",
    "build_dataset_mask",
    "build_pitch_mask",
    "build_term_mask",
    "ce_from_logits",
    "ce_loss",
    "composite_loss",
    "dice_loss",
    "dice_loss_and_grad",
    "grad_check",
    "l1_loss",
    "normalize_rows",
    "supcon_loss",
    "supcon_raw",
    "supcon_terms",
    "validate_mask",
]
