"""
Linear filtering and resampling.

Gaussian blur is separable, truncated at ±3σ and padded by edge
replication; scipy's 1-D gaussian filter provides both.
"""

import numpy as np
from scipy import ndimage

from imgcore.types import ImageBuffer
from utils.exceptions import DataValidationError

TRUNCATE_SIGMAS = 3.0


def gaussian_blur(img: np.ndarray, sigma: float) -> ImageBuffer:
    """Blur the spatial axes of an image or float mask.

    ``sigma == 0`` returns the input unchanged.
    """
    if sigma < 0:
        raise DataValidationError(f"sigma must be non-negative, got {sigma}")
    if sigma == 0:
        return img
    out = np.asarray(img, dtype=np.float64)
    for axis in (0, 1):
        out = ndimage.gaussian_filter1d(
            out, sigma, axis=axis, mode="nearest", truncate=TRUNCATE_SIGMAS
        )
    return out


def resize(img: np.ndarray, height: int, width: int, order: int = 1) -> np.ndarray:
    """Resample the spatial axes to (height, width).

    Pixel centers are mapped onto each other (align-corners sampling),
    bilinear by default.
    """
    src = np.asarray(img, dtype=np.float64)
    h, w = src.shape[:2]
    rows = np.linspace(0.0, h - 1.0, height) if height > 1 else np.zeros(1)
    cols = np.linspace(0.0, w - 1.0, width) if width > 1 else np.zeros(1)
    grid = np.meshgrid(rows, cols, indexing="ij")
    if src.ndim == 2:
        return ndimage.map_coordinates(src, grid, order=order, mode="nearest")
    channels = [
        ndimage.map_coordinates(src[..., c], grid, order=order, mode="nearest")
        for c in range(src.shape[2])
    ]
    return np.stack(channels, axis=-1)
