"""
Raster primitives shared by augmentation and annotation.

Colour conversion, blur, morphology, connected components, polygon and
spline rasterization, rigid landmark fitting and PNG I/O.
"""

from .color import luma, rgb_to_ycrcb, ycrcb_to_rgb
from .filters import gaussian_blur, resize
from .io import read_mask, read_png, read_rgba, write_mask, write_png
from .landmarks import LandmarkConfig
from .morphology import component_count, disk, largest_component, morph
from .raster import catmull_rom_closed, fill_polygon, polygon_area
from .rigid import SimilarityTransform, fit_rigid, warp_image
from .types import (
    BinaryMask,
    ImageBuffer,
    LandmarkSet,
    as_image,
    as_mask,
    clamp01,
    require_same_shape,
)

__all__ = [
    "BinaryMask",
    "ImageBuffer",
    "LandmarkConfig",
    "LandmarkSet",
    "SimilarityTransform",
    "as_image",
    "as_mask",
    "catmull_rom_closed",
    "clamp01",
    "component_count",
    "disk",
    "fill_polygon",
    "fit_rigid",
    "gaussian_blur",
    "largest_component",
    "luma",
    "morph",
    "polygon_area",
    "read_mask",
    "read_png",
    "read_rgba",
    "require_same_shape",
    "resize",
    "rgb_to_ycrcb",
    "warp_image",
    "write_mask",
    "write_png",
]
