"""
Face-mask occlusion synthesis.

The lower face is covered by a spline-smoothed polygon through a fixed set
of landmarks along the nose bridge, cheeks and jaw, filled with a solid
color or a tiled texture.
"""

from typing import Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from imgcore.landmarks import MASK_POLYGON
from imgcore.raster import fill_polygon
from imgcore.types import BinaryMask, ImageBuffer, LandmarkSet, as_image

Fill = Union[npt.ArrayLike, ImageBuffer]


def mask_region(
    landmarks: LandmarkSet,
    height: int,
    width: int,
    polygon_ids: Sequence[int] = MASK_POLYGON,
    smooth: bool = True,
) -> BinaryMask:
    """Pixels covered by the mask polygon."""
    return fill_polygon(landmarks.array(polygon_ids), smooth, width, height)


def tile_texture(texture: ImageBuffer, height: int, width: int) -> ImageBuffer:
    """Repeat a texture from the top-left corner to cover (height, width)."""
    tex = as_image(texture, channels=(3,))
    reps = (-(-height // tex.shape[0]), -(-width // tex.shape[1]), 1)
    return np.tile(tex, reps)[:height, :width]


def mask_synthesis(
    img: ImageBuffer,
    landmarks: LandmarkSet,
    fill: Fill,
    polygon_ids: Sequence[int] = MASK_POLYGON,
    smooth: bool = True,
) -> Tuple[ImageBuffer, bool]:
    """Paint the mask region; ``fill`` is an RGB triple or a texture image.

    Returns (image, mask_flag).
    """
    rgb = as_image(img, channels=(3,))
    h, w = rgb.shape[:2]
    region = mask_region(landmarks, h, w, polygon_ids, smooth)
    paint = np.asarray(fill, dtype=np.float64)
    out = rgb.copy()
    if paint.ndim == 1:
        out[region] = np.clip(paint.reshape(3), 0.0, 1.0)
    else:
        out[region] = np.clip(tile_texture(paint, h, w), 0.0, 1.0)[region]
    return out, True
