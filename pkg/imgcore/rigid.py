"""
Rigid landmark fitting and image warping.

Least-squares Procrustes alignment (rotation, translation and optional
uniform scale) between corresponding 2-D point sets.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt
from scipy import ndimage

from imgcore.types import LandmarkSet
from utils.exceptions import DataValidationError, DegenerateGeometryError

PointsLike = Union[LandmarkSet, npt.ArrayLike]

_SWAP_XY = np.array([[0.0, 1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class SimilarityTransform:
    """x' = scale * R(angle) @ x + translation, in (x, y) pixel coordinates."""

    angle: float  # radians
    scale: float
    translation: Tuple[float, float]
    residual: float = 0.0

    @classmethod
    def identity(cls) -> "SimilarityTransform":
        return cls(angle=0.0, scale=1.0, translation=(0.0, 0.0))

    @property
    def rotation(self) -> npt.NDArray[np.float64]:
        c, s = np.cos(self.angle), np.sin(self.angle)
        return np.array([[c, -s], [s, c]])

    @property
    def matrix(self) -> npt.NDArray[np.float64]:
        """3x3 homogeneous matrix."""
        m = np.eye(3)
        m[:2, :2] = self.scale * self.rotation
        m[:2, 2] = self.translation
        return m

    def apply(self, points: npt.ArrayLike) -> npt.NDArray[np.float64]:
        p = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        return p @ (self.scale * self.rotation).T + np.asarray(self.translation)

    def scaled_about(self, factor: float, center: npt.ArrayLike) -> "SimilarityTransform":
        """Compose with an extra uniform scale about ``center`` (output frame)."""
        c = np.asarray(center, dtype=np.float64)
        t = factor * (np.asarray(self.translation) - c) + c
        return SimilarityTransform(
            angle=self.angle,
            scale=self.scale * factor,
            translation=(float(t[0]), float(t[1])),
            residual=self.residual,
        )


def _paired_points(
    src: PointsLike, dst: PointsLike, ids: Optional[Sequence[int]]
) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(src, LandmarkSet) or isinstance(dst, LandmarkSet):
        if not (isinstance(src, LandmarkSet) and isinstance(dst, LandmarkSet)):
            raise TypeError("src and dst must both be LandmarkSets or both arrays")
        if ids is None:
            ids = sorted(set(src.points) & set(dst.points))
        return src.array(ids), dst.array(ids)
    a = np.asarray(src, dtype=np.float64).reshape(-1, 2)
    b = np.asarray(dst, dtype=np.float64).reshape(-1, 2)
    if a.shape != b.shape:
        raise DataValidationError(f"Point sets differ in shape: {a.shape} vs {b.shape}")
    return a, b


def fit_rigid(
    src: PointsLike,
    dst: PointsLike,
    allow_scale: bool = True,
    ids: Optional[Sequence[int]] = None,
) -> SimilarityTransform:
    """Least-squares similarity transform mapping ``src`` onto ``dst``.

    Reflections are excluded. Raises DegenerateGeometryError for fewer than
    two correspondences or coincident source points.
    """
    a, b = _paired_points(src, dst, ids)
    n = len(a)
    if n < 2:
        raise DegenerateGeometryError(
            f"Rigid fit needs at least 2 corresponding points, got {n}",
            geometry={"points": n},
        )

    mu_a, mu_b = a.mean(axis=0), b.mean(axis=0)
    xa, xb = a - mu_a, b - mu_b
    var_a = float(np.sum(xa * xa)) / n
    if var_a < 1e-12:
        raise DegenerateGeometryError(
            "Source points are coincident; rigid fit is singular",
            geometry={"points": n, "variance": var_a},
        )

    cov = xb.T @ xa / n
    u, sv, vt = np.linalg.svd(cov)
    d = np.eye(2)
    if np.linalg.det(u) * np.linalg.det(vt) < 0:
        d[1, 1] = -1.0
    rot = u @ d @ vt
    scale = float(np.trace(np.diag(sv) @ d) / var_a) if allow_scale else 1.0
    t = mu_b - scale * rot @ mu_a

    fitted = a @ (scale * rot).T + t
    residual = float(np.sqrt(np.mean(np.sum((fitted - b) ** 2, axis=1))))
    return SimilarityTransform(
        angle=float(np.arctan2(rot[1, 0], rot[0, 0])),
        scale=scale,
        translation=(float(t[0]), float(t[1])),
        residual=residual,
    )


def warp_image(
    img: np.ndarray,
    transform: SimilarityTransform,
    height: int,
    width: int,
    order: int = 1,
) -> np.ndarray:
    """Resample ``img`` into a (height, width) canvas under ``transform``.

    ``transform`` maps source pixel coordinates to canvas coordinates; canvas
    pixels with no source are zero.
    """
    inv_lin = transform.rotation.T / transform.scale
    inv_off = -inv_lin @ np.asarray(transform.translation)
    matrix = _SWAP_XY @ inv_lin @ _SWAP_XY
    offset = _SWAP_XY @ inv_off

    src = np.asarray(img, dtype=np.float64)
    planes = [src] if src.ndim == 2 else [src[..., c] for c in range(src.shape[2])]
    warped = [
        ndimage.affine_transform(
            plane,
            matrix,
            offset=offset,
            output_shape=(height, width),
            order=order,
            mode="constant",
            cval=0.0,
        )
        for plane in planes
    ]
    return warped[0] if src.ndim == 2 else np.stack(warped, axis=-1)
