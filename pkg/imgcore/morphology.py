"""
Binary morphology and connected components.

Structuring elements are rasterized disks; components use 8-connectivity.
"""

from typing import Literal

import numpy as np
from scipy import ndimage

from imgcore.types import BinaryMask, as_mask
from utils.exceptions import DataValidationError

MorphOp = Literal["dilate", "erode", "open", "close"]

EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


def disk(diameter: float) -> BinaryMask:
    """Rasterized disk of the given diameter on an odd-sized grid.

    Cells whose centers lie within ``diameter / 2`` of the grid center are
    set; diameters below 2 yield a single pixel.
    """
    if diameter < 1:
        raise DataValidationError(f"kernel diameter must be >= 1, got {diameter}")
    radius = diameter / 2.0
    half = int(np.floor(radius))
    yy, xx = np.mgrid[-half : half + 1, -half : half + 1]
    return (xx * xx + yy * yy) <= radius * radius


def morph(mask: BinaryMask, op: MorphOp, kernel_diameter: float) -> BinaryMask:
    """Apply dilation, erosion, opening or closing with a disk element.

    Pixels outside the image count as background for every operation except
    closing, which is evaluated as the complement of the opening of the
    complement; both compound operations are idempotent.
    """
    m = as_mask(mask)
    element = disk(kernel_diameter)
    if op == "dilate":
        return ndimage.binary_dilation(m, structure=element)
    if op == "erode":
        return ndimage.binary_erosion(m, structure=element, border_value=0)
    if op == "open":
        return ndimage.binary_opening(m, structure=element)
    if op == "close":
        return ~ndimage.binary_opening(~m, structure=element)
    raise DataValidationError(f"Unknown morphological operation: {op}")


def largest_component(mask: BinaryMask) -> BinaryMask:
    """Keep the largest 8-connected region; ties go to the first in raster order."""
    m = as_mask(mask)
    labels, count = ndimage.label(m, structure=EIGHT_CONNECTED)
    if count == 0:
        return np.zeros_like(m)
    sizes = np.bincount(labels.ravel())
    sizes[0] = 0
    return labels == int(np.argmax(sizes))


def component_count(mask: BinaryMask) -> int:
    _, count = ndimage.label(as_mask(mask), structure=EIGHT_CONNECTED)
    return int(count)
