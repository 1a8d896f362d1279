"""
Segmentation labels for a face image.

Four masks per face: the eye region (contour plus eyelid) and the iris,
for each eye. A side whose iris/eye IoU falls below the threshold, or
whose masks could not be produced, is marked invalid and excluded from
segmentation supervision.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from annotate.crop import SIDES, Side, extract_eye_crop
from annotate.iris import REFERENCE_WIDTH, IrisParams, iris_mask
from imgcore.landmarks import LandmarkConfig
from imgcore.raster import fill_polygon
from imgcore.types import BinaryMask, ImageBuffer, LandmarkSet, as_image, as_mask, require_same_shape
from utils.exceptions import DataValidationError, DegenerateGeometryError, MissingLandmarksError

MASK_NAMES = ("right_eye", "left_eye", "right_iris", "left_iris")


class AnnotateConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    crop_width: int = Field(default=int(REFERENCE_WIDTH), ge=16)
    crop_expand: float = Field(default=0.4, ge=0)
    iou_threshold: float = Field(default=0.2, ge=0, le=1)
    smooth_polygons: bool = True
    iris: IrisParams = Field(default_factory=IrisParams)


@dataclass(frozen=True)
class SegLabel:
    masks: Dict[str, Optional[BinaryMask]]
    valid: Dict[str, bool]
    iou: Dict[str, float] = field(default_factory=dict)

    def mask(self, name: str) -> Optional[BinaryMask]:
        return self.masks.get(name)

    def to_json(self) -> Dict[str, Any]:
        return {
            "valid": {name: bool(self.valid.get(name, False)) for name in MASK_NAMES},
            "iou": {side: round(float(v), 6) for side, v in sorted(self.iou.items())},
        }


def iou(a: BinaryMask, b: BinaryMask) -> float:
    """Intersection over union; 0 when both masks are empty."""
    ma, mb = as_mask(a), as_mask(b)
    require_same_shape(ma, mb, "masks")
    union = int(np.count_nonzero(ma | mb))
    if union == 0:
        return 0.0
    return int(np.count_nonzero(ma & mb)) / union


def filter_labels(label: SegLabel, threshold: float = 0.2) -> SegLabel:
    """Invalidate both masks of any side whose iris/eye IoU is below ``threshold``."""
    valid = dict(label.valid)
    ious = dict(label.iou)
    for side in SIDES:
        eye, iris = label.masks.get(f"{side}_eye"), label.masks.get(f"{side}_iris")
        if eye is None or iris is None:
            ious.pop(side, None)
            keep = False
        else:
            ious[side] = iou(eye, iris)
            keep = ious[side] >= threshold
        if not keep:
            valid[f"{side}_eye"] = False
            valid[f"{side}_iris"] = False
    return replace(label, valid=valid, iou=ious)


def eye_region_mask(
    landmarks: LandmarkSet,
    side: Side,
    height: int,
    width: int,
    config: LandmarkConfig = LandmarkConfig(),
    smooth: bool = True,
) -> BinaryMask:
    """Eye plus eyelid polygon; raises for missing or degenerate landmarks."""
    return fill_polygon(landmarks.array(config.eye_region(side)), smooth, width, height)


def annotate_face(
    face: ImageBuffer,
    landmarks: LandmarkSet,
    config: AnnotateConfig = AnnotateConfig(),
    landmark_config: LandmarkConfig = LandmarkConfig(),
) -> SegLabel:
    """Produce and filter the four masks of one face."""
    img = as_image(face, channels=(3,))
    h, w = img.shape[:2]
    masks: Dict[str, Optional[BinaryMask]] = {name: None for name in MASK_NAMES}

    for side in SIDES:
        try:
            masks[f"{side}_eye"] = eye_region_mask(
                landmarks, side, h, w, landmark_config, config.smooth_polygons
            )
        except (MissingLandmarksError, DegenerateGeometryError) as e:
            logger.debug(f"No {side} eye region: {e.message}")

        try:
            crop = extract_eye_crop(
                img, landmarks, side, config.crop_width, config.crop_expand, landmark_config
            )
            inner = fill_polygon(
                crop.to_crop(landmarks.array(landmark_config.inner_eye(side))),
                config.smooth_polygons,
                crop.width,
                crop.height,
            )
            iris = crop.paste(iris_mask(crop, inner, config.iris), (h, w))
            masks[f"{side}_iris"] = iris if iris.any() else None
        except (MissingLandmarksError, DegenerateGeometryError, DataValidationError) as e:
            logger.debug(f"No {side} iris: {e.message}")

    label = SegLabel(masks=masks, valid={name: masks[name] is not None for name in MASK_NAMES})
    return filter_labels(label, config.iou_threshold)

