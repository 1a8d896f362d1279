"""
Evaluation metrics and reports over externally produced predictions.
"""

from .metrics import (
    AngularErrors,
    ScreenErrors,
    angular_error_summary,
    angular_errors,
    screen_error_summary,
    screen_errors,
    split_by_group,
)
from .records import VIEWS, PredictionRecord
from .reports import GroupReport, group_report
from .sessions import GROUP_ORDER, GROUPS, SESSIONS, groups_for, reduced_session_subjects
from .zerogaze import PoseFilterResult, ViewStats, pose_filter, zerogaze_stats

__all__ = [
    "GROUPS",
    "GROUP_ORDER",
    "SESSIONS",
    "VIEWS",
    "AngularErrors",
    "GroupReport",
    "PoseFilterResult",
    "PredictionRecord",
    "ScreenErrors",
    "ViewStats",
    "angular_error_summary",
    "angular_errors",
    "group_report",
    "groups_for",
    "pose_filter",
    "reduced_session_subjects",
    "screen_error_summary",
    "screen_errors",
    "split_by_group",
    "zerogaze_stats",
]
