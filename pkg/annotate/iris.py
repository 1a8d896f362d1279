"""
Intensity-based iris segmentation.

The iris is the darkest sizeable region inside the inner-eye contour. The
eye crop is blurred to suppress corneal reflections, pixels near and
beyond the contour are brightened, pixels are split at the median
brightness of the in-contour pixels, and the dark side is cleaned by
morphology, reduced to its largest component and rounded by a blur and
a fixed threshold.

All pixel-unit constants are defined for a crop of ``reference_width``
pixels and scale linearly with the actual crop width. Candidates are
limited to the inner-eye mask unless ``restrict_to_eye`` is off.
"""

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from imgcore.color import luma
from imgcore.filters import gaussian_blur
from imgcore.morphology import largest_component, morph
from imgcore.types import BinaryMask, ImageBuffer, as_mask, require_same_shape
from utils.exceptions import DataValidationError

REFERENCE_WIDTH = 128.0


class IrisParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    reference_width: float = Field(default=REFERENCE_WIDTH, gt=0)
    reflection_sigma: float = Field(default=2.0, ge=0)
    brighten_weight: float = Field(default=0.5, ge=0)
    brighten_sigma: float = Field(default=15.0, ge=0)
    dilation_divisor: float = Field(default=6.0, gt=0)
    open_diameter: float = Field(default=13.0, ge=1)
    close_diameter: float = Field(default=5.0, ge=1)
    rounding_sigma: float = Field(default=15.0, ge=0)
    rounding_threshold: float = Field(default=0.2, ge=0, le=1)
    restrict_to_eye: bool = True

    def scale(self, width: float) -> float:
        """Factor k applied to every pixel-unit constant for a crop ``width`` wide."""
        return float(width) / self.reference_width


def mask_width(mask: BinaryMask) -> int:
    """Bounding-box width in pixels; 0 for an empty mask."""
    cols = np.flatnonzero(mask.any(axis=0))
    return int(cols[-1] - cols[0] + 1) if cols.size else 0


def round_mask(mask: BinaryMask, sigma: float, threshold: float) -> BinaryMask:
    """Blur a binary mask as floats and keep pixels above ``threshold``."""
    blurred = gaussian_blur(as_mask(mask).astype(np.float64), sigma)
    return largest_component(blurred > threshold)


def iris_mask(
    crop: ImageBuffer, inner_eye: BinaryMask, params: IrisParams = IrisParams()
) -> BinaryMask:
    """Segment the iris inside an inner-eye mask.

    ``crop`` is the eye image (an EyeCrop's image or any RGB array). The
    result is a single 8-connected component or empty; an empty inner mask
    raises DataValidationError.
    """
    img = np.asarray(getattr(crop, "image", crop), dtype=np.float64)
    m = as_mask(inner_eye)
    require_same_shape(img, m, "eye crop and inner eye mask")
    if not m.any():
        raise DataValidationError("Inner eye mask is empty")
    k = params.scale(img.shape[1])

    y = gaussian_blur(luma(img), params.reflection_sigma * k)
    outside = 1.0 - morph(m, "dilate", max(1.0, mask_width(m) / params.dilation_divisor))
    y = np.clip(
        y + params.brighten_weight * gaussian_blur(outside.astype(np.float64), params.brighten_sigma * k),
        0.0,
        1.0,
    )

    tau = float(np.median(y[m]))
    dark = y < tau
    if params.restrict_to_eye:
        dark &= m

    dark = morph(dark, "open", max(1.0, params.open_diameter * k))
    dark = morph(dark, "close", max(1.0, params.close_diameter * k))
    dark = largest_component(dark)
    if not dark.any():
        logger.debug("Iris candidate vanished after morphology")
        return dark

    return round_mask(dark, params.rounding_sigma * k, params.rounding_threshold)
