"""
Eye crops.

A crop is the bounding box of one eye's inner contour, expanded on every
side and resampled to a fixed width. Crop pixel (u, v) samples face pixel
(x0 + u / s, y0 + v / s), where (x0, y0) is the box origin and s the
resampling factor.
"""

from dataclasses import dataclass
from typing import Literal, Tuple

import numpy as np
import numpy.typing as npt
from scipy import ndimage

from annotate.iris import REFERENCE_WIDTH
from imgcore.landmarks import LandmarkConfig
from imgcore.types import BinaryMask, ImageBuffer, LandmarkSet, as_image, as_mask
from utils.exceptions import DegenerateGeometryError

Side = Literal["left", "right"]
SIDES: Tuple[Side, ...] = ("right", "left")


@dataclass(frozen=True)
class EyeCrop:
    image: ImageBuffer
    origin: Tuple[float, float]
    scale: float
    side: Side

    @property
    def width(self) -> int:
        return int(self.image.shape[1])

    @property
    def height(self) -> int:
        return int(self.image.shape[0])

    def to_crop(self, points: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Map face-image (x, y) points into crop coordinates."""
        p = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        return (p - np.asarray(self.origin)) * self.scale

    def paste(self, mask: BinaryMask, face_shape: Tuple[int, int]) -> BinaryMask:
        """Resample a crop-space mask back onto the face image."""
        m = as_mask(mask)
        if m.shape != self.image.shape[:2]:
            raise ValueError(f"mask shape {m.shape} differs from crop {self.image.shape[:2]}")
        h, w = face_shape
        out = np.zeros((h, w), dtype=bool)
        if not m.any():
            return out

        x0, y0 = self.origin
        c0 = max(int(np.floor(x0)), 0)
        r0 = max(int(np.floor(y0)), 0)
        c1 = min(int(np.ceil(x0 + (self.width - 1) / self.scale)) + 1, w)
        r1 = min(int(np.ceil(y0 + (self.height - 1) / self.scale)) + 1, h)
        rows, cols = np.mgrid[r0:r1, c0:c1].astype(np.float64)
        coords = [(rows - y0) * self.scale, (cols - x0) * self.scale]
        values = ndimage.map_coordinates(m.astype(np.float64), coords, order=1, mode="constant")
        out[r0:r1, c0:c1] = values >= 0.5
        return out


def eye_box(
    landmarks: LandmarkSet,
    side: Side,
    expand: float,
    face_shape: Tuple[int, int],
    config: LandmarkConfig,
) -> Tuple[float, float, float, float]:
    """Expanded inner-eye bounding box (x0, y0, x1, y1), clipped to the face."""
    pts = landmarks.array(config.inner_eye(side))
    x0, y0 = pts.min(axis=0)
    x1, y1 = pts.max(axis=0)
    bw, bh = x1 - x0, y1 - y0
    if bw <= 0 or bh <= 0:
        raise DegenerateGeometryError(
            f"Inner {side} eye landmarks have an empty bounding box",
            geometry={"side": side, "width": float(bw), "height": float(bh)},
        )
    h, w = face_shape
    return (
        max(x0 - expand * bw, 0.0),
        max(y0 - expand * bh, 0.0),
        min(x1 + expand * bw, w - 1.0),
        min(y1 + expand * bh, h - 1.0),
    )


def extract_eye_crop(
    face: ImageBuffer,
    landmarks: LandmarkSet,
    side: Side,
    crop_width: int = int(REFERENCE_WIDTH),
    expand: float = 0.4,
    config: LandmarkConfig = LandmarkConfig(),
) -> EyeCrop:
    img = as_image(face, channels=(3,))
    x0, y0, x1, y1 = eye_box(landmarks, side, expand, img.shape[:2], config)
    scale = (crop_width - 1) / (x1 - x0)
    height = max(int(round((y1 - y0) * scale)) + 1, 2)

    rows = y0 + np.arange(height) / scale
    cols = x0 + np.arange(crop_width) / scale
    grid = np.meshgrid(rows, cols, indexing="ij")
    planes = [
        ndimage.map_coordinates(img[..., c], grid, order=1, mode="nearest") for c in range(3)
    ]
    return EyeCrop(
        image=np.clip(np.stack(planes, axis=-1), 0.0, 1.0),
        origin=(float(x0), float(y0)),
        scale=float(scale),
        side=side,
    )
