"""
PNG input/output.

8-bit files map to [0, 1] floats by /255 and back by round(255·x) after
clamping. Masks are single-channel PNGs holding 0 or 255.
"""

from pathlib import Path
from typing import Tuple, Union

import numpy as np
from PIL import Image

from imgcore.types import BinaryMask, ImageBuffer, as_image, as_mask
from utils.exceptions import ImageFormatError, MissingInputError

PathLike = Union[str, Path]


def _open(path: PathLike) -> Image.Image:
    p = Path(path)
    if not p.exists():
        raise MissingInputError(f"Image not found: {p}", path=str(p))
    try:
        return Image.open(p)
    except OSError as e:
        raise ImageFormatError(f"Unreadable image {p}: {e}") from e


def to_uint8(img: np.ndarray) -> np.ndarray:
    return np.round(np.clip(img, 0.0, 1.0) * 255.0).astype(np.uint8)


def read_png(path: PathLike, mode: str = "RGB") -> ImageBuffer:
    """Read an image as floats in [0, 1]; ``mode="L"`` gives a 2-D array."""
    with _open(path) as im:
        data = np.asarray(im.convert(mode), dtype=np.float64) / 255.0
    return data


def read_rgba(path: PathLike) -> Tuple[ImageBuffer, ImageBuffer]:
    """Read an overlay; returns (rgb, alpha)."""
    data = read_png(path, mode="RGBA")
    return data[..., :3], data[..., 3]


def write_png(path: PathLike, img: ImageBuffer) -> Path:
    arr = as_image(img, channels=(1, 3, 4))
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[..., 0]
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(to_uint8(arr)).save(p, format="PNG")
    return p


def read_mask(path: PathLike) -> BinaryMask:
    with _open(path) as im:
        return np.asarray(im.convert("L")) >= 128


def write_mask(path: PathLike, mask: BinaryMask) -> Path:
    m = as_mask(mask)
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(m.astype(np.uint8) * 255).save(p, format="PNG")
    return p
