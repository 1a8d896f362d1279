"""
Stochastic multi-view augmentation.

Photometric operations, background replacement, glasses and face-mask
synthesis, forced mirroring of even views, and a parallel batch runner.
"""

from .glasses import (
    GlassesTemplate,
    fit_template,
    glasses_synthesis,
    load_library,
    load_template,
    select_template,
)
from .mask import mask_region, mask_synthesis, tile_texture
from .ops import (
    background_replace,
    blur,
    color_jitter,
    desaturate,
    flip,
    gradient_field,
    illumination,
    sensor_noise,
)
from .protocol import METHODS, AssetPaths, AugmentProtocol, AugmentSettings
from .runner import AugmentRunResult, run_augment
from .views import (
    AugmentAssets,
    AugmentedView,
    AugmentSource,
    build_view,
    build_views,
    draw_methods,
    load_assets,
    view_seed,
)

__all__ = [
    "METHODS",
    "AssetPaths",
    "AugmentAssets",
    "AugmentProtocol",
    "AugmentRunResult",
    "AugmentSettings",
    "AugmentSource",
    "AugmentedView",
    "GlassesTemplate",
    "background_replace",
    "blur",
    "build_view",
    "build_views",
    "color_jitter",
    "desaturate",
    "draw_methods",
    "fit_template",
    "flip",
    "glasses_synthesis",
    "gradient_field",
    "illumination",
    "load_assets",
    "load_library",
    "load_template",
    "mask_region",
    "mask_synthesis",
    "select_template",
    "sensor_noise",
    "tile_texture",
    "view_seed",
]
