"""
Polygon and spline rasterization.

Polygons are filled with the even-odd rule, sampled at pixel centers.
Smoothed outlines are closed centripetal Catmull-Rom splines through the
given vertices.
"""

import numpy as np
import numpy.typing as npt
from matplotlib.path import Path

from imgcore.types import BinaryMask
from utils.exceptions import DataValidationError, DegenerateGeometryError

MIN_SUBDIVISIONS = 4
AREA_EPS = 1e-9


def polygon_area(points: npt.ArrayLike) -> float:
    """Unsigned shoelace area."""
    p = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    x, y = p[:, 0], p[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def catmull_rom_closed(
    points: npt.ArrayLike, subdivisions: int = 8, alpha: float = 0.5
) -> npt.NDArray[np.float64]:
    """Sample a closed Catmull-Rom spline through ``points``.

    ``alpha=0.5`` is the centripetal parameterization. Returns
    ``len(points) * subdivisions`` samples, starting at the first vertex.
    """
    if subdivisions < MIN_SUBDIVISIONS:
        raise DataValidationError(f"need at least {MIN_SUBDIVISIONS} subdivisions per segment")
    p = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    # consecutive duplicates give zero-length knot intervals
    keep = np.any(np.abs(p - np.roll(p, 1, axis=0)) > 0, axis=1)
    p = p[keep] if keep.any() else p[:1]
    n = len(p)
    if n < 3:
        return p.copy()

    s = np.linspace(0.0, 1.0, subdivisions, endpoint=False)[:, None]
    segments = []
    for i in range(n):
        p0, p1, p2, p3 = p[(i - 1) % n], p[i], p[(i + 1) % n], p[(i + 2) % n]
        t0 = 0.0
        t1 = t0 + max(np.linalg.norm(p1 - p0) ** alpha, AREA_EPS)
        t2 = t1 + max(np.linalg.norm(p2 - p1) ** alpha, AREA_EPS)
        t3 = t2 + max(np.linalg.norm(p3 - p2) ** alpha, AREA_EPS)
        t = t1 + s * (t2 - t1)

        a1 = (t1 - t) / (t1 - t0) * p0 + (t - t0) / (t1 - t0) * p1
        a2 = (t2 - t) / (t2 - t1) * p1 + (t - t1) / (t2 - t1) * p2
        a3 = (t3 - t) / (t3 - t2) * p2 + (t - t2) / (t3 - t2) * p3
        b1 = (t2 - t) / (t2 - t0) * a1 + (t - t0) / (t2 - t0) * a2
        b2 = (t3 - t) / (t3 - t1) * a2 + (t - t1) / (t3 - t1) * a3
        segments.append((t2 - t) / (t2 - t1) * b1 + (t - t1) / (t2 - t1) * b2)
    return np.vstack(segments)


def fill_polygon(
    points: npt.ArrayLike,
    smooth: bool,
    width: int,
    height: int,
    subdivisions: int = 8,
) -> BinaryMask:
    """Rasterize a closed polygon into a (height, width) mask.

    Raises DegenerateGeometryError for fewer than three vertices or a
    polygon without area.
    """
    p = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    if len(p) < 3:
        raise DegenerateGeometryError(
            f"Polygon needs at least 3 points, got {len(p)}",
            geometry={"points": len(p)},
        )
    if polygon_area(p) <= AREA_EPS:
        raise DegenerateGeometryError(
            "Polygon is degenerate (collinear vertices)",
            geometry={"points": len(p), "area": 0.0},
        )

    outline = catmull_rom_closed(p, subdivisions) if smooth else p
    path = Path(np.vstack([outline, outline[:1]]), closed=True)

    mask = np.zeros((height, width), dtype=bool)
    x0 = max(int(np.floor(outline[:, 0].min())), 0)
    x1 = min(int(np.ceil(outline[:, 0].max())) + 1, width)
    y0 = max(int(np.floor(outline[:, 1].min())), 0)
    y1 = min(int(np.ceil(outline[:, 1].max())) + 1, height)
    if x0 >= x1 or y0 >= y1:
        return mask

    yy, xx = np.mgrid[y0:y1, x0:x1]
    centers = np.column_stack([xx.ravel(), yy.ravel()]).astype(np.float64)
    inside = path.contains_points(centers)
    mask[y0:y1, x0:x1] = inside.reshape(y1 - y0, x1 - x0)
    return mask
