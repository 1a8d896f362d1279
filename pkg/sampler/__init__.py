"""
Stratified per-bin, per-dataset epoch planning with subject balancing.
"""

from .planner import (
    EmptyCellPolicy,
    EpochPlan,
    PlanEntry,
    plan_epoch,
    subject_histogram,
)
from .registry import DROP_REASONS, SampleRegistry, ingest

__all__ = [
    "DROP_REASONS",
    "EmptyCellPolicy",
    "EpochPlan",
    "PlanEntry",
    "SampleRegistry",
    "ingest",
    "plan_epoch",
    "subject_histogram",
]
