"""
Calibration point selection by proximity to screen locations.

A calibration point is the average prediction and average ground truth of
the ``k`` samples whose ground truth lies closest to a target location.
Ties in distance keep sample order.
"""

from typing import List, Sequence, Tuple

import numpy as np

from calibrate.model import GazePointPair, Point, pair_arrays
from geometry.screen import ScreenGeometry
from utils.exceptions import InsufficientDataError


def nearest_indices(pairs: Sequence[GazePointPair], target: Point, k: int) -> List[int]:
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if len(pairs) < k:
        raise InsufficientDataError(
            f"Need at least {k} pairs to select a calibration point, got {len(pairs)}",
            required=k,
            available=len(pairs),
        )
    _, gt = pair_arrays(pairs)
    dist = np.hypot(gt[:, 0] - target[0], gt[:, 1] - target[1])
    return [int(i) for i in np.argsort(dist, kind="stable")[:k]]


def average_pairs(pairs: Sequence[GazePointPair]) -> GazePointPair:
    pred, gt = pair_arrays(pairs)
    p, g = pred.mean(axis=0), gt.mean(axis=0)
    first = pairs[0]
    return GazePointPair(
        pred=(float(p[0]), float(p[1])),
        gt=(float(g[0]), float(g[1])),
        sample_id="+".join(x.sample_id for x in pairs),
        subject=first.subject,
        session=first.session,
    )


def anchor_locations(screen: ScreenGeometry) -> List[Point]:
    """Screen center followed by the four corners."""
    w, h = screen.screen_size_mm
    return [screen.center_mm, (0.0, 0.0), (w, 0.0), (0.0, h), (w, h)]


def select_near(
    pairs: Sequence[GazePointPair], target: Point, k: int = 3
) -> Tuple[GazePointPair, List[int]]:
    """Averaged pair near ``target`` and the indices it was built from."""
    idx = nearest_indices(pairs, target, k)
    return average_pairs([pairs[i] for i in idx]), idx


def select_center_points(
    pairs: Sequence[GazePointPair], k: int = 3, screen: ScreenGeometry = ScreenGeometry()
) -> GazePointPair:
    return select_near(pairs, screen.center_mm, k)[0]


def select_anchor_points(
    pairs: Sequence[GazePointPair], k: int = 3, screen: ScreenGeometry = ScreenGeometry()
) -> List[GazePointPair]:
    """Five calibration points: screen center and the four corners."""
    return [select_near(pairs, loc, k)[0] for loc in anchor_locations(screen)]
