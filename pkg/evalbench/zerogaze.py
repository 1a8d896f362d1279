"""
Bias statistics for zero-gaze triplets.

Every ZeroGaze image has ground truth (0, 0), so the mean prediction of a
view is its visual bias. Triplets hold one clean, one glasses and one mask
view of the same generated face.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from evalbench.records import VIEWS, PredictionRecord, stack
from geometry.gaze import GazeInterval, clamp_angles
from utils.exceptions import DataValidationError


@dataclass(frozen=True)
class ViewStats:
    count: int
    mean: Tuple[float, float]
    std: Tuple[float, float]
    p95_radius: float
    bias_vs_clean: Optional[Tuple[float, float]] = None

    def to_json(self) -> Dict[str, Any]:
        return {
            "count": self.count,
            "mean_pitch": self.mean[0],
            "mean_yaw": self.mean[1],
            "std_pitch": self.std[0],
            "std_yaw": self.std[1],
            "p95_radius": self.p95_radius,
            "bias_vs_clean": None if self.bias_vs_clean is None else list(self.bias_vs_clean),
        }


@dataclass
class PoseFilterResult:
    retained: List[PredictionRecord] = field(default_factory=list)
    triplets_kept: int = 0
    dropped_pose: int = 0
    dropped_incomplete: int = 0

    def to_json(self) -> Dict[str, int]:
        return {
            "triplets_kept": self.triplets_kept,
            "dropped_pose": self.dropped_pose,
            "dropped_incomplete": self.dropped_incomplete,
        }


def zerogaze_stats(
    records: Sequence[PredictionRecord], interval: Optional[GazeInterval] = GazeInterval()
) -> Dict[str, ViewStats]:
    """Per-view mean, std and 95th-percentile distance from zero gaze."""
    by_view: Dict[str, List[PredictionRecord]] = defaultdict(list)
    for r in records:
        if r.view is None:
            raise DataValidationError(f"Record {r.sample_id} has no view tag")
        by_view[r.view].append(r)

    stats: Dict[str, ViewStats] = {}
    for view in VIEWS:
        if not by_view.get(view):
            continue
        a = stack(by_view[view], "pred_angles")
        if interval is not None:
            a = clamp_angles(a, interval)
        mean = a.mean(axis=0)
        std = a.std(axis=0)
        stats[view] = ViewStats(
            count=int(a.shape[0]),
            mean=(float(mean[0]), float(mean[1])),
            std=(float(std[0]), float(std[1])),
            p95_radius=float(np.percentile(np.hypot(a[:, 0], a[:, 1]), 95)),
        )

    clean = stats.get("clean")
    if clean is not None:
        for view, s in list(stats.items()):
            stats[view] = ViewStats(
                count=s.count,
                mean=s.mean,
                std=s.std,
                p95_radius=s.p95_radius,
                bias_vs_clean=(s.mean[0] - clean.mean[0], s.mean[1] - clean.mean[1]),
            )
    return stats


def _within(pose: Optional[Tuple[float, float, float]], pitch_tol: float, other_tol: float) -> bool:
    # unannotated images are not filtered
    if pose is None:
        return True
    pitch, yaw, roll = pose
    return abs(pitch) < pitch_tol and abs(yaw) < other_tol and abs(roll) < other_tol


def pose_filter(
    records: Sequence[PredictionRecord], pitch_tol: float = 10.0, other_tol: float = 5.0
) -> PoseFilterResult:
    """Keep triplets whose three images all pass the head-pose tolerances.

    Triplets missing a view or holding a view twice are dropped and counted.
    Retained records keep their input order.
    """
    triplets: Dict[str, List[PredictionRecord]] = defaultdict(list)
    for r in records:
        if r.triplet_id is None or r.view is None:
            raise DataValidationError(f"Record {r.sample_id} has no triplet id or view tag")
        triplets[r.triplet_id].append(r)

    keep: set = set()
    result = PoseFilterResult()
    for tid, members in triplets.items():
        if sorted(m.view for m in members) != sorted(VIEWS):
            result.dropped_incomplete += 1
            continue
        if all(_within(m.head_pose, pitch_tol, other_tol) for m in members):
            keep.add(tid)
        else:
            result.dropped_pose += 1

    result.retained = [r for r in records if r.triplet_id in keep]
    result.triplets_kept = len(keep)
    logger.info(
        f"Pose filter kept {result.triplets_kept} triplet(s); dropped "
        f"{result.dropped_pose} for pose, {result.dropped_incomplete} incomplete"
    )
    return result
