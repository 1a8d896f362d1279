"""
Evaluation protocols for personalized calibration.

``mpii_protocol`` draws random calibration samples per subject, repeats
the draw, and reports per-subject medians averaged over subjects.
``realgaze_protocol`` picks calibration points near the screen center (and
corners) within each subject or session and scores the remaining samples,
next to the uncalibrated baseline on the same samples.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Mapping, Sequence, Tuple

import numpy as np
from loguru import logger

from calibrate.model import (
    CalibrationModel,
    GazePointPair,
    fit_model,
    fit_npoint,
    fit_one_point,
    pair_arrays,
)
from calibrate.selection import anchor_locations, select_near
from evalbench.metrics import ScreenErrors, screen_error_summary
from geometry.screen import ScreenGeometry
from utils.exceptions import DataValidationError, InsufficientDataError
from utils.seeding import rng_for

GroupBy = Literal["session", "subject"]
METRICS = ("d_x", "d_y", "l2")


def _metrics(e: ScreenErrors) -> Dict[str, float]:
    return {m: getattr(e, m) for m in METRICS}


@dataclass
class MpiiResult:
    n_points: int
    repetitions: int
    per_subject: Dict[str, Dict[str, float]] = field(default_factory=dict)
    calibrated: Dict[str, float] = field(default_factory=dict)
    baseline: Dict[str, float] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return {
            "protocol": "mpii",
            "n_points": self.n_points,
            "repetitions": self.repetitions,
            "per_subject": self.per_subject,
            "calibrated": self.calibrated,
            "baseline": self.baseline,
        }


def mpii_protocol(
    pairs_by_subject: Mapping[str, Sequence[GazePointPair]],
    n_calib: int,
    reps: int = 9,
    seed: int = 0,
) -> MpiiResult:
    """Random ``n_calib``-sample calibration per subject, median over ``reps`` draws."""
    if n_calib < 1 or reps < 1:
        raise DataValidationError(f"n_calib and reps must be positive, got {n_calib}, {reps}")
    if not pairs_by_subject:
        raise InsufficientDataError("No subjects to calibrate", required=1, available=0)

    result = MpiiResult(n_points=n_calib, repetitions=reps)
    baselines = []
    for subject in sorted(pairs_by_subject):
        pairs = list(pairs_by_subject[subject])
        if len(pairs) <= n_calib:
            raise InsufficientDataError(
                f"Subject {subject} has {len(pairs)} pairs; need more than {n_calib}",
                required=n_calib + 1,
                available=len(pairs),
            )
        pred, gt = pair_arrays(pairs)
        runs = []
        for rep in range(reps):
            order = rng_for(seed, "mpii", subject, n_calib, rep).permutation(len(pairs))
            calib, rest = order[:n_calib], order[n_calib:]
            model = fit_model([pairs[i] for i in calib])
            runs.append(_metrics(screen_error_summary(model.apply(pred[rest]), gt[rest])))
        result.per_subject[subject] = {m: float(np.median([r[m] for r in runs])) for m in METRICS}
        baselines.append(_metrics(screen_error_summary(pred, gt)))

    subjects = list(result.per_subject.values())
    result.calibrated = {m: float(np.mean([s[m] for s in subjects])) for m in METRICS}
    result.baseline = {m: float(np.mean([b[m] for b in baselines])) for m in METRICS}
    logger.info(
        f"{n_calib}-point calibration over {len(subjects)} subject(s): "
        f"l2 {result.baseline['l2']:.2f} -> {result.calibrated['l2']:.2f} mm"
    )
    return result


@dataclass
class RealGazeResult:
    n_points: int
    group_by: GroupBy
    models: Dict[str, CalibrationModel] = field(default_factory=dict)
    corrected: List[GazePointPair] = field(default_factory=list)
    uncorrected: List[GazePointPair] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)

    def errors(self, which: Literal["calibrated", "baseline"] = "calibrated") -> ScreenErrors:
        pairs = self.corrected if which == "calibrated" else self.uncorrected
        pred, gt = pair_arrays(pairs)
        return screen_error_summary(pred, gt)

    def to_json(self) -> Dict[str, Any]:
        return {
            "protocol": "realgaze",
            "n_points": self.n_points,
            "group_by": self.group_by,
            "models": {k: m.model_dump(mode="json") for k, m in self.models.items()},
            "calibrated": self.errors("calibrated").to_json() if self.corrected else None,
            "baseline": self.errors("baseline").to_json() if self.uncorrected else None,
            "skipped": list(self.skipped),
        }


def _group_key(pair: GazePointPair, group_by: GroupBy) -> str:
    if group_by == "session" and pair.session is not None:
        return f"{pair.subject}/{pair.session}"
    return pair.subject


def calibrate_group(
    pairs: Sequence[GazePointPair], n_points: int, k: int, screen: ScreenGeometry
) -> Tuple[CalibrationModel, List[int]]:
    """Fit one group's model; returns it with the indices used for calibration."""
    if n_points == 1:
        point, used = select_near(pairs, screen.center_mm, k)
        return fit_one_point(point), used
    points, used_all = [], []
    for loc in anchor_locations(screen):
        point, used = select_near(pairs, loc, k)
        points.append(point)
        used_all.extend(used)
    return fit_npoint(points), sorted(set(used_all))


def realgaze_protocol(
    pairs: Sequence[GazePointPair],
    n_points: Literal[1, 5] = 1,
    k: int = 3,
    screen: ScreenGeometry = ScreenGeometry(),
    group_by: GroupBy = "session",
) -> RealGazeResult:
    """Nearest-to-target calibration per group, scored on the remaining samples.

    Groups too small to leave any sample after calibration are skipped and
    listed in the result.
    """
    if n_points not in (1, 5):
        raise DataValidationError(f"RealGaze calibration uses 1 or 5 points, got {n_points}")

    groups: Dict[str, List[GazePointPair]] = defaultdict(list)
    for p in pairs:
        groups[_group_key(p, group_by)].append(p)

    result = RealGazeResult(n_points=n_points, group_by=group_by)
    for key in sorted(groups):
        members = groups[key]
        try:
            model, used = calibrate_group(members, n_points, k, screen)
        except InsufficientDataError as e:
            logger.warning(f"Skipping calibration group {key}: {e.message}")
            result.skipped.append(key)
            continue
        taken = set(used)
        rest = [p for i, p in enumerate(members) if i not in taken]
        if not rest:
            logger.warning(f"Skipping calibration group {key}: no samples left to score")
            result.skipped.append(key)
            continue
        result.models[key] = model
        result.uncorrected.extend(rest)
        corrected = model.apply(pair_arrays(rest)[0])
        result.corrected.extend(
            GazePointPair(
                pred=(float(c[0]), float(c[1])),
                gt=p.gt,
                sample_id=p.sample_id,
                subject=p.subject,
                session=p.session,
            )
            for p, c in zip(rest, corrected)
        )
    return result
