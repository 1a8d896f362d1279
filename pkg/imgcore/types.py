"""
Raster and landmark types shared by augmentation and annotation.

Images are ``float64`` arrays of shape (H, W) or (H, W, C) with values in
[0, 1]; masks are ``bool`` arrays of shape (H, W).
"""

from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from utils.exceptions import ImageFormatError, MissingLandmarksError

ImageBuffer = npt.NDArray[np.float64]
BinaryMask = npt.NDArray[np.bool_]


def as_image(data: npt.ArrayLike, channels: Tuple[int, ...] = (1, 3)) -> ImageBuffer:
    """Validate and convert an array to an ImageBuffer."""
    img = np.asarray(data, dtype=np.float64)
    n_channels = 1 if img.ndim == 2 else (img.shape[2] if img.ndim == 3 else -1)
    if n_channels not in channels:
        raise ImageFormatError(
            f"Expected an image with {channels} channel(s), got shape {img.shape}",
            shape=img.shape,
        )
    if img.size and (not np.all(np.isfinite(img))):
        raise ImageFormatError("Image contains non-finite values", shape=img.shape)
    return img


def as_mask(data: npt.ArrayLike) -> BinaryMask:
    """Validate and convert an array to a BinaryMask."""
    mask = np.asarray(data)
    if mask.ndim != 2:
        raise ImageFormatError(f"Expected a 2-D mask, got shape {mask.shape}", mask.shape)
    return mask.astype(bool)


def require_same_shape(a: np.ndarray, b: np.ndarray, what: str = "inputs") -> None:
    """Raise if two rasters do not share height and width."""
    if a.shape[:2] != b.shape[:2]:
        raise ImageFormatError(
            f"Dimension mismatch between {what}: {a.shape[:2]} vs {b.shape[:2]}",
            shape=(a.shape, b.shape),
        )


def clamp01(img: np.ndarray) -> ImageBuffer:
    return np.clip(img, 0.0, 1.0)


@dataclass(frozen=True)
class LandmarkSet:
    """Landmark coordinates in pixels, keyed by canonical landmark ID.

    Pixel (col, row) has its center at integer coordinates (x=col, y=row).
    """

    points: Mapping[int, Tuple[float, float]]

    def __post_init__(self) -> None:
        for idx, (x, y) in self.points.items():
            if not (np.isfinite(x) and np.isfinite(y)):
                raise ImageFormatError(f"Landmark {idx} has non-finite coordinates")

    @classmethod
    def from_array(cls, ids: Sequence[int], coords: npt.ArrayLike) -> "LandmarkSet":
        xy = np.asarray(coords, dtype=np.float64).reshape(-1, 2)
        if len(ids) != len(xy):
            raise ImageFormatError("Landmark ID and coordinate counts differ")
        if len(set(ids)) != len(ids):
            raise ImageFormatError("Landmark IDs must be unique")
        return cls({int(i): (float(p[0]), float(p[1])) for i, p in zip(ids, xy)})

    @classmethod
    def from_json(cls, payload: Mapping) -> "LandmarkSet":
        """Build from ``{"points": {"<id>": [x, y], ...}}`` or a bare mapping."""
        raw = payload.get("points", payload)
        if isinstance(raw, list):
            return cls({i: (float(p[0]), float(p[1])) for i, p in enumerate(raw)})
        return cls({int(k): (float(v[0]), float(v[1])) for k, v in raw.items()})

    def to_json(self) -> Dict[str, Dict[str, list]]:
        return {"points": {str(k): [v[0], v[1]] for k, v in sorted(self.points.items())}}

    def __len__(self) -> int:
        return len(self.points)

    def missing(self, ids: Iterable[int]) -> list:
        return [i for i in ids if i not in self.points]

    def array(self, ids: Sequence[int]) -> npt.NDArray[np.float64]:
        """Return an (n, 2) array of the requested landmarks, in order."""
        missing = self.missing(ids)
        if missing:
            raise MissingLandmarksError(
                f"Missing landmark IDs: {missing}", missing_ids=missing
            )
        return np.array([self.points[i] for i in ids], dtype=np.float64)

    def mirrored(self, width: int, pairs: Iterable[Tuple[int, int]]) -> "LandmarkSet":
        """Mirror horizontally (x -> width - 1 - x) and swap left/right IDs."""
        swap: Dict[int, int] = {}
        for a, b in pairs:
            swap[a] = b
            swap[b] = a
        out = {}
        for idx, (x, y) in self.points.items():
            out[swap.get(idx, idx)] = (width - 1 - x, y)
        return LandmarkSet(out)

    def transformed(self, fn) -> "LandmarkSet":
        """Apply ``fn`` to the (n, 2) coordinate array and keep the IDs."""
        ids = sorted(self.points)
        if not ids:
            return self
        return LandmarkSet.from_array(ids, fn(self.array(ids)))
