"""
Prediction CSV loading.

Prediction files are produced by an external model. Every column is read
as text and numeric columns are converted explicitly, so malformed cells
are reported by row instead of silently becoming NaN.
"""

from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence, Union

import numpy as np
import pandas as pd
from loguru import logger

from calibrate.model import GazePointPair
from evalbench.records import PredictionRecord
from utils.exceptions import DataValidationError, InsufficientDataError, MissingInputError

PathLike = Union[str, Path]
Mode = Literal["screen", "angular", "zerogaze", "pairs"]

SCREEN_COLUMNS = ["pred_x_mm", "pred_y_mm", "gt_x_mm", "gt_y_mm"]
ANGLE_COLUMNS = ["pred_pitch", "pred_yaw", "gt_pitch", "gt_yaw"]
HEAD_COLUMNS = ["head_pitch", "head_yaw", "head_roll"]

REQUIRED_COLUMNS: Dict[str, List[str]] = {
    "screen": ["sample_id", *SCREEN_COLUMNS, "subject", "session"],
    "pairs": ["sample_id", *SCREEN_COLUMNS, "subject"],
    "angular": ["sample_id", *ANGLE_COLUMNS],
    "zerogaze": ["sample_id", "pred_pitch", "pred_yaw", "view", "triplet_id"],
}
NUMERIC_COLUMNS = [*SCREEN_COLUMNS, *ANGLE_COLUMNS, *HEAD_COLUMNS]


def _text(value: object) -> Optional[str]:
    s = "" if value is None else str(value).strip()
    return s or None


class PredictionLoader:
    """Loads and validates prediction files for one evaluation mode."""

    def load(self, path: PathLike, mode: Mode) -> pd.DataFrame:
        p = Path(path)
        if not p.exists():
            raise MissingInputError(f"Prediction file not found: {p}", path=str(p))
        df = pd.read_csv(p, dtype=str, keep_default_na=False)
        self._validate(df, mode)
        logger.info(f"Loaded {len(df)} {mode} prediction rows from {p}")
        return self._convert(df)

    def _validate(self, df: pd.DataFrame, mode: Mode) -> None:
        required = REQUIRED_COLUMNS[mode]
        missing = [col for col in required if col not in df.columns]
        if missing:
            raise DataValidationError(
                f"Prediction file missing required columns: {', '.join(missing)}",
                validation_errors=[{"available": list(df.columns)}],
            )
        if len(df) == 0:
            raise InsufficientDataError("Prediction file has no rows", required=1, available=0)

    def _convert(self, df: pd.DataFrame) -> pd.DataFrame:
        out = df.copy()
        for col in NUMERIC_COLUMNS:
            if col not in out.columns:
                continue
            blank = out[col].str.strip() == ""
            values = pd.to_numeric(out[col].where(~blank), errors="coerce")
            bad = values.isna() & ~blank
            if col not in HEAD_COLUMNS:
                bad |= blank
            if bad.any() or not np.all(np.isfinite(values[~blank])):
                rows = [int(i) + 2 for i in np.flatnonzero(bad.to_numpy())][:10]
                raise DataValidationError(
                    f"Column {col} has non-numeric or non-finite values",
                    validation_errors=[{"column": col, "lines": rows}],
                )
            out[col] = values
        return out

    def to_records(self, df: pd.DataFrame) -> List[PredictionRecord]:
        def pair(row: Dict, a: str, b: str) -> Optional[tuple]:
            if a in row and b in row:
                return (float(row[a]), float(row[b]))
            return None

        records = []
        for row in df.to_dict("records"):
            head = None
            if all(c in row for c in HEAD_COLUMNS) and not any(pd.isna(row[c]) for c in HEAD_COLUMNS):
                head = (float(row["head_pitch"]), float(row["head_yaw"]), float(row["head_roll"]))
            records.append(
                PredictionRecord(
                    sample_id=str(row["sample_id"]),
                    subject=_text(row.get("subject")) or "",
                    session=_text(row.get("session")),
                    pred_pog=pair(row, "pred_x_mm", "pred_y_mm"),
                    gt_pog=pair(row, "gt_x_mm", "gt_y_mm"),
                    pred_angles=pair(row, "pred_pitch", "pred_yaw"),
                    gt_angles=pair(row, "gt_pitch", "gt_yaw"),
                    view=_text(row.get("view")),
                    triplet_id=_text(row.get("triplet_id")),
                    head_pose=head,
                )
            )
        return records

    def to_pairs(self, df: pd.DataFrame) -> List[GazePointPair]:
        return [
            GazePointPair(
                pred=(float(row["pred_x_mm"]), float(row["pred_y_mm"])),
                gt=(float(row["gt_x_mm"]), float(row["gt_y_mm"])),
                sample_id=str(row["sample_id"]),
                subject=_text(row.get("subject")) or "",
                session=_text(row.get("session")),
            )
            for row in df.to_dict("records")
        ]


def load_predictions(path: PathLike, mode: Mode) -> List[PredictionRecord]:
    loader = PredictionLoader()
    return loader.to_records(loader.load(path, mode))


def load_pairs(path: PathLike) -> List[GazePointPair]:
    loader = PredictionLoader()
    return loader.to_pairs(loader.load(path, "pairs"))


def write_pairs(path: PathLike, pairs: Sequence[GazePointPair]) -> Path:
    """Write pairs in the screen prediction schema."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    df = pd.DataFrame(
        [
            {
                "sample_id": x.sample_id,
                "pred_x_mm": x.pred[0],
                "pred_y_mm": x.pred[1],
                "gt_x_mm": x.gt[0],
                "gt_y_mm": x.gt[1],
                "subject": x.subject,
                "session": x.session or "",
            }
            for x in pairs
        ],
        columns=["sample_id", *SCREEN_COLUMNS, "subject", "session"],
    )
    df.to_csv(p, index=False, float_format="%.6f", lineterminator="\n")
    return p
