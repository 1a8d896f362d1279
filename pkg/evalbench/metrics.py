"""
Error metrics over prediction records.

Screen errors are in millimetres: ``d_x`` and ``d_y`` are mean absolute
per-axis errors and ``l2`` the mean Euclidean error. Angular errors are in
degrees: ``d`` is the mean angle between gaze vectors, ``d_pitch`` and
``d_yaw`` the mean absolute per-axis differences. Predicted angles are
clamped to the training interval before scoring unless no interval is
given.
"""

from collections import defaultdict
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
import numpy.typing as npt
from loguru import logger

from evalbench.records import PredictionRecord, stack
from evalbench.sessions import GROUP_ORDER, check_session, groups_for, reduced_session_subjects
from geometry.gaze import GazeInterval, clamp_angles
from geometry.gaze import angular_errors as per_row_angles
from utils.exceptions import DataValidationError, InsufficientDataError


@dataclass(frozen=True)
class ScreenErrors:
    d_x: float
    d_y: float
    l2: float
    count: int

    def to_json(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class AngularErrors:
    d: float
    d_pitch: float
    d_yaw: float
    count: int

    def to_json(self) -> Dict[str, float]:
        return asdict(self)


def screen_error_summary(pred: npt.ArrayLike, gt: npt.ArrayLike) -> ScreenErrors:
    p = np.asarray(pred, dtype=np.float64).reshape(-1, 2)
    g = np.asarray(gt, dtype=np.float64).reshape(-1, 2)
    if p.shape != g.shape:
        raise DataValidationError(f"Shape mismatch: {p.shape} vs {g.shape}")
    if p.shape[0] == 0:
        raise InsufficientDataError("No points to score", required=1, available=0)
    delta = p - g
    return ScreenErrors(
        d_x=float(np.mean(np.abs(delta[:, 0]))),
        d_y=float(np.mean(np.abs(delta[:, 1]))),
        l2=float(np.mean(np.hypot(delta[:, 0], delta[:, 1]))),
        count=int(p.shape[0]),
    )


def angular_error_summary(
    pred: npt.ArrayLike, gt: npt.ArrayLike, interval: Optional[GazeInterval] = None
) -> AngularErrors:
    p = np.asarray(pred, dtype=np.float64).reshape(-1, 2)
    g = np.asarray(gt, dtype=np.float64).reshape(-1, 2)
    if p.shape != g.shape:
        raise DataValidationError(f"Shape mismatch: {p.shape} vs {g.shape}")
    if p.shape[0] == 0:
        raise InsufficientDataError("No predictions to score", required=1, available=0)
    if interval is not None:
        p = clamp_angles(p, interval)
    delta = np.abs(p - g)
    return AngularErrors(
        d=float(np.mean(per_row_angles(p, g))),
        d_pitch=float(np.mean(delta[:, 0])),
        d_yaw=float(np.mean(delta[:, 1])),
        count=int(p.shape[0]),
    )


def split_by_group(
    records: Sequence[PredictionRecord], exclude_reduced: bool = False
) -> Dict[str, List[PredictionRecord]]:
    """Assign records to report groups; every group is present, possibly empty.

    With ``exclude_reduced``, subjects that skipped some session types
    only count towards Overall.
    """
    sessions: Dict[str, set] = defaultdict(set)
    for r in records:
        sessions[r.subject].add(check_session(r.session))
    reduced = reduced_session_subjects(sessions) if exclude_reduced else set()
    if reduced:
        logger.info(f"Restricting {len(reduced)} reduced-session subject(s) to Overall")

    groups: Dict[str, List[PredictionRecord]] = {g: [] for g in GROUP_ORDER}
    for r in records:
        for g in groups_for(r.session):
            if g != "Overall" and r.subject in reduced:
                continue
            groups[g].append(r)
    return groups


def screen_errors(
    records: Sequence[PredictionRecord], exclude_reduced: bool = False
) -> Dict[str, ScreenErrors]:
    """Per-group screen errors; empty groups are omitted."""
    out: Dict[str, ScreenErrors] = {}
    for group, members in split_by_group(records, exclude_reduced).items():
        if not members:
            logger.debug(f"Group {group} has no records; omitted")
            continue
        out[group] = screen_error_summary(stack(members, "pred_pog"), stack(members, "gt_pog"))
    return out


def angular_errors(
    records: Sequence[PredictionRecord], interval: Optional[GazeInterval] = GazeInterval()
) -> AngularErrors:
    return angular_error_summary(
        stack(records, "pred_angles"), stack(records, "gt_angles"), interval
    )
