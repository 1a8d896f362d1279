"""
Colour space conversions.

ITU-R BT.601 full-range YCrCb on [0, 1] data: luma from the 0.299 / 0.587 /
0.114 weights, both chroma channels offset by 0.5. Channel order of the
converted image is (Y, Cr, Cb).
"""

import numpy as np

from imgcore.types import ImageBuffer, as_image

BT601_KR = 0.299
BT601_KG = 0.587
BT601_KB = 0.114

_RGB_TO_YCRCB = np.array(
    [
        [BT601_KR, BT601_KG, BT601_KB],
        # Cr
        [
            0.5,
            -0.5 * BT601_KG / (1.0 - BT601_KR),
            -0.5 * BT601_KB / (1.0 - BT601_KR),
        ],
        # Cb
        [
            -0.5 * BT601_KR / (1.0 - BT601_KB),
            -0.5 * BT601_KG / (1.0 - BT601_KB),
            0.5,
        ],
    ]
)
_YCRCB_TO_RGB = np.linalg.inv(_RGB_TO_YCRCB)
_CHROMA_OFFSET = np.array([0.0, 0.5, 0.5])


def rgb_to_ycrcb(img: ImageBuffer) -> ImageBuffer:
    """Convert an RGB image to YCrCb."""
    rgb = as_image(img, channels=(3,))
    return rgb @ _RGB_TO_YCRCB.T + _CHROMA_OFFSET


def ycrcb_to_rgb(img: ImageBuffer) -> ImageBuffer:
    """Convert a YCrCb image back to RGB (no clamping)."""
    ycc = as_image(img, channels=(3,))
    return (ycc - _CHROMA_OFFSET) @ _YCRCB_TO_RGB.T


def luma(img: ImageBuffer) -> ImageBuffer:
    """Brightness channel; single-channel inputs are returned as 2-D arrays."""
    arr = as_image(img)
    if arr.ndim == 2:
        return arr
    if arr.shape[2] == 1:
        return arr[..., 0]
    return arr @ _RGB_TO_YCRCB[0]
