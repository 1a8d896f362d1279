"""
Group-by-metric report tables.

Rows follow the fixed group order (Overall, Ideal, Side-Lit, Glasses,
Masks); groups without records are listed in ``omitted`` instead.
Renderings are deterministic for identical inputs.
"""

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Union

import pandas as pd

from evalbench.metrics import (
    angular_error_summary,
    screen_error_summary,
    split_by_group,
)
from evalbench.records import PredictionRecord, stack
from geometry.gaze import GazeInterval

ReportMetric = Literal["screen", "angular"]

SCREEN_COLUMNS = ["group", "count", "d_x", "d_y", "l2"]
ANGULAR_COLUMNS = ["group", "count", "d", "d_pitch", "d_yaw"]
FLOAT_FORMAT = "%.4f"


@dataclass
class GroupReport:
    metric: ReportMetric
    rows: List[Dict[str, Any]] = field(default_factory=list)
    omitted: List[str] = field(default_factory=list)
    session_counts: Dict[str, int] = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return not self.rows

    @property
    def columns(self) -> List[str]:
        return SCREEN_COLUMNS if self.metric == "screen" else ANGULAR_COLUMNS

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=self.columns)

    def to_csv(self, path: Optional[Union[str, Path]] = None) -> str:
        text = self.to_frame().to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        if path is not None:
            Path(path).write_text(text, encoding="utf-8")
        return text

    def to_text(self) -> str:
        if self.empty:
            return "(no records)\n"
        body = self.to_frame().to_string(index=False, float_format=lambda v: f"{v:.2f}")
        notes = f"\nomitted: {', '.join(self.omitted)}" if self.omitted else ""
        return body + notes + "\n"

    def to_json(self) -> Dict[str, Any]:
        return {
            "metric": self.metric,
            "rows": self.rows,
            "omitted": list(self.omitted),
            "session_counts": dict(self.session_counts),
        }


def group_report(
    records: Sequence[PredictionRecord],
    metric: ReportMetric = "screen",
    interval: Optional[GazeInterval] = GazeInterval(),
    exclude_reduced: bool = False,
) -> GroupReport:
    """Score every session group; unknown session tags raise."""
    groups = split_by_group(records, exclude_reduced)
    report = GroupReport(
        metric=metric,
        session_counts=dict(sorted(Counter(r.session for r in records).items())),
    )
    for group, members in groups.items():
        if not members:
            report.omitted.append(group)
            continue
        if metric == "screen":
            scores = screen_error_summary(stack(members, "pred_pog"), stack(members, "gt_pog"))
        else:
            scores = angular_error_summary(
                stack(members, "pred_angles"), stack(members, "gt_angles"), interval
            )
        report.rows.append({"group": group, **scores.to_json()})
    return report
