"""
Photometric and geometric augmentation operations.

Every operation takes and returns RGB images in [0, 1]. Operations are
deterministic given their arguments; stochastic ones accept a seed or a
numpy Generator.
"""

from typing import Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from geometry.gaze import GazeAngles
from imgcore.color import luma, rgb_to_ycrcb, ycrcb_to_rgb
from imgcore.filters import gaussian_blur, resize
from imgcore.types import ImageBuffer, LandmarkSet, as_image, clamp01, require_same_shape
from utils.seeding import as_generator

SeedLike = Union[int, np.random.Generator, None]

PIXEL_SCALE = 255.0
MIN_FIELD_STD = 1e-8


def color_jitter(img: ImageBuffer, gain: npt.ArrayLike, offset: float = 0.0) -> ImageBuffer:
    """Per-channel gain followed by a brightness offset."""
    rgb = as_image(img, channels=(3,))
    return clamp01(rgb * np.asarray(gain, dtype=np.float64).reshape(1, 1, -1) + offset)


def desaturate(img: ImageBuffer, amount: float) -> ImageBuffer:
    """Blend towards the luma image; ``amount=1`` gives gray."""
    rgb = as_image(img, channels=(3,))
    gray = luma(rgb)[..., None]
    return clamp01((1.0 - amount) * rgb + amount * gray)


def blur(img: ImageBuffer, sigma: float) -> ImageBuffer:
    return clamp01(gaussian_blur(as_image(img, channels=(3,)), sigma))


def sensor_noise(
    img: ImageBuffer,
    alpha_y: float = 11.0,
    alpha_c: float = 15.0,
    blotch: float = 2.0,
    seed: SeedLike = None,
) -> ImageBuffer:
    """Inject camera-like noise in YCrCb space.

    Luma receives white Gaussian noise; each chroma channel receives a
    Gaussian field blurred by ``blotch`` and rescaled to unit standard
    deviation. Strengths are on the 0-255 scale.
    """
    if alpha_y < 0 or alpha_c < 0:
        raise ValueError(f"noise strengths must be non-negative, got {alpha_y}, {alpha_c}")
    rgb = as_image(img, channels=(3,))
    if alpha_y == 0 and alpha_c == 0:
        return rgb.copy()

    rng = as_generator(seed)
    h, w = rgb.shape[:2]
    ycc = rgb_to_ycrcb(rgb)
    if alpha_y > 0:
        ycc[..., 0] += (alpha_y / PIXEL_SCALE) * rng.standard_normal((h, w))
    if alpha_c > 0:
        for channel in (1, 2):
            field = gaussian_blur(rng.standard_normal((h, w)), blotch)
            std = float(field.std())
            if std < MIN_FIELD_STD:
                continue
            ycc[..., channel] += (alpha_c / PIXEL_SCALE) * field / std
    return clamp01(ycrcb_to_rgb(clamp01(ycc)))


def gradient_field(height: int, width: int, direction: float) -> npt.NDArray[np.float64]:
    """Linear ramp from 0 to 1 along ``direction`` (degrees, 0 = rightwards,
    90 = upwards)."""
    theta = np.deg2rad(direction)
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    proj = xx * np.cos(theta) - yy * np.sin(theta)
    span = float(proj.max() - proj.min())
    if span <= 0:
        return np.zeros((height, width))
    return (proj - proj.min()) / span


def illumination(
    img: ImageBuffer,
    direction: float,
    opacity: float,
    tint: npt.ArrayLike = (1.0, 1.0, 1.0),
) -> ImageBuffer:
    """Overlay a tinted linear light gradient."""
    if not 0.0 <= opacity <= 1.0:
        raise ValueError(f"opacity must lie in [0, 1], got {opacity}")
    rgb = as_image(img, channels=(3,))
    if opacity == 0:
        return rgb.copy()
    g = opacity * gradient_field(rgb.shape[0], rgb.shape[1], direction)[..., None]
    color = np.asarray(tint, dtype=np.float64).reshape(1, 1, 3)
    return clamp01(rgb * (1.0 - g) + g * color)


def background_replace(
    img: ImageBuffer, matte: npt.ArrayLike, bg: ImageBuffer
) -> ImageBuffer:
    """Composite the foreground over a new background using a soft matte."""
    rgb = as_image(img, channels=(3,))
    back = as_image(bg, channels=(3,))
    alpha = np.clip(np.asarray(matte, dtype=np.float64), 0.0, 1.0)
    require_same_shape(rgb, alpha, "image and matte")
    require_same_shape(rgb, back, "image and background")
    a = alpha[..., None]
    return clamp01(a * rgb + (1.0 - a) * back)


def fit_background(bg: ImageBuffer, height: int, width: int) -> ImageBuffer:
    """Resize a background scene to the image size."""
    back = as_image(bg, channels=(3,))
    if back.shape[:2] == (height, width):
        return back
    return clamp01(resize(back, height, width))


def flip(
    img: ImageBuffer,
    landmarks: Optional[LandmarkSet],
    angles: GazeAngles,
    mirror_pairs: Sequence[Tuple[int, int]] = (),
) -> Tuple[ImageBuffer, Optional[LandmarkSet], GazeAngles]:
    """Mirror horizontally; yaw is negated, pitch is kept."""
    arr = as_image(img)
    width = arr.shape[1]
    mirrored = None if landmarks is None else landmarks.mirrored(width, mirror_pairs)
    return (
        np.ascontiguousarray(arr[:, ::-1]),
        mirrored,
        GazeAngles(angles.pitch, -angles.yaw),
    )
