"""
Automatic eye-region and iris segmentation labels with quality filtering.
"""

from .crop import SIDES, EyeCrop, extract_eye_crop
from .iris import REFERENCE_WIDTH, IrisParams, iris_mask, mask_width, round_mask
from .labels import (
    MASK_NAMES,
    AnnotateConfig,
    SegLabel,
    annotate_face,
    eye_region_mask,
    filter_labels,
    iou,
)
from .runner import AnnotateRunResult, run_annotate

__all__ = [
    "MASK_NAMES",
    "REFERENCE_WIDTH",
    "SIDES",
    "AnnotateConfig",
    "AnnotateRunResult",
    "EyeCrop",
    "IrisParams",
    "SegLabel",
    "annotate_face",
    "extract_eye_crop",
    "eye_region_mask",
    "filter_labels",
    "iou",
    "iris_mask",
    "mask_width",
    "round_mask",
    "run_annotate",
]
