"""
Stratified epoch planning.

Each epoch draws exactly ``quota`` samples per (dataset, gaze bin) cell.
Underfull cells are drawn with replacement by concatenating successive
permutations of the cell. Subject-balanced datasets cycle through their
subjects round-robin inside each cell. Every cell draws from its own
generator seeded by (seed, dataset, bin, epoch).
"""

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from gridcodec.grid import GridSpec
from sampler.registry import SampleRegistry
from utils.exceptions import EmptyCellError
from utils.seeding import rng_for

Cell = Tuple[str, int]


class EmptyCellPolicy(str, Enum):
    ERROR = "error"
    SKIP = "skip"


@dataclass(frozen=True)
class PlanEntry:
    sample_id: str
    dataset_id: str
    bin_index: int
    epoch: int
    draw_index: int

    def to_json(self) -> Dict[str, Any]:
        return {
            "sample_id": self.sample_id,
            "dataset_id": self.dataset_id,
            "bin_index": self.bin_index,
            "epoch": self.epoch,
            "draw_index": self.draw_index,
        }


@dataclass
class EpochPlan:
    epoch: int
    seed: int
    quota: int
    entries: List[PlanEntry] = field(default_factory=list)
    counts: Dict[Cell, int] = field(default_factory=dict)
    skipped_cells: List[Cell] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def per_dataset(self) -> Dict[str, int]:
        totals: Counter = Counter()
        for (dataset, _), n in self.counts.items():
            totals[dataset] += n
        return dict(sorted(totals.items()))

    def summary(self) -> Dict[str, Any]:
        return {
            "epoch": self.epoch,
            "seed": self.seed,
            "quota": self.quota,
            "total_draws": len(self.entries),
            "per_dataset": self.per_dataset(),
            "skipped_cells": [f"{d}:{k}" for d, k in self.skipped_cells],
        }


def _cycle_permutations(
    items: Sequence[str], count: int, rng: np.random.Generator
) -> List[str]:
    out: List[str] = []
    while len(out) < count:
        out.extend(items[i] for i in rng.permutation(len(items)))
    return out[:count]


def _draw_cell(
    members: Sequence[str],
    subjects: Optional[Dict[str, List[str]]],
    quota: int,
    rng: np.random.Generator,
) -> List[str]:
    if subjects is None:
        return _cycle_permutations(members, quota, rng)

    order = [sorted(subjects)[i] for i in rng.permutation(len(subjects))]
    per_subject = [
        (quota - s + len(order) - 1) // len(order) for s in range(len(order))
    ]
    streams = {
        subject: iter(_cycle_permutations(subjects[subject], n, rng))
        for subject, n in zip(order, per_subject)
    }
    return [next(streams[order[j % len(order)]]) for j in range(quota)]


def _cells(reg: SampleRegistry, grid: GridSpec) -> Dict[Cell, List[str]]:
    records = list(reg)
    if not records:
        return {}
    labels = np.array([(r.pitch, r.yaw) for r in records])
    bins = grid.discretize_many(labels)
    cells: Dict[Cell, List[str]] = defaultdict(list)
    for record, (cp, cy) in zip(records, bins):
        cells[(record.dataset_id, grid.bin_index(int(cp), int(cy)))].append(
            record.sample_id
        )
    return {cell: sorted(ids) for cell, ids in cells.items()}


def plan_epoch(
    reg: SampleRegistry,
    grid: GridSpec,
    quota: int,
    seed: int,
    epoch: int = 0,
    policy: EmptyCellPolicy | str = EmptyCellPolicy.ERROR,
    datasets: Optional[Iterable[str]] = None,
    subject_balanced: Iterable[str] = ("C",),
) -> EpochPlan:
    """Draw ``quota`` samples per (dataset, bin) cell for one epoch."""
    if quota < 1:
        raise ValueError(f"quota must be positive, got {quota}")
    policy = EmptyCellPolicy(policy)
    dataset_list = sorted(set(datasets)) if datasets is not None else reg.datasets
    balanced = set(subject_balanced)
    cells = _cells(reg, grid)

    empty = [
        (d, k) for d in dataset_list for k in range(grid.n_bins) if (d, k) not in cells
    ]
    if empty and policy is EmptyCellPolicy.ERROR:
        raise EmptyCellError(
            f"{len(empty)} empty (dataset, bin) cell(s); use policy=skip to ignore",
            cells=[f"{d}:{k}" for d, k in empty],
        )

    plan = EpochPlan(epoch=epoch, seed=seed, quota=quota, skipped_cells=empty)
    drawn: List[Tuple[str, str, int]] = []
    for dataset in dataset_list:
        for k in range(grid.n_bins):
            members = cells.get((dataset, k))
            if not members:
                continue
            subjects = None
            if dataset in balanced:
                subjects = defaultdict(list)
                for sid in members:
                    subjects[reg.get(sid).subject_id].append(sid)
            rng = rng_for(seed, dataset, k, epoch)
            picks = _draw_cell(members, subjects, quota, rng)
            drawn.extend((sid, dataset, k) for sid in picks)
            plan.counts[(dataset, k)] = len(picks)

    order = rng_for(seed, "order", epoch).permutation(len(drawn))
    plan.entries = [
        PlanEntry(
            sample_id=drawn[i][0],
            dataset_id=drawn[i][1],
            bin_index=drawn[i][2],
            epoch=epoch,
            draw_index=position,
        )
        for position, i in enumerate(order)
    ]
    if empty:
        logger.warning(f"Skipped {len(empty)} empty cell(s)")
    logger.info(f"Planned epoch {epoch}: {len(plan)} draws over {len(plan.counts)} cells")
    return plan


def subject_histogram(plan: EpochPlan, reg: SampleRegistry) -> Dict[str, Any]:
    """Per-subject draw counts, overall and per cell."""
    totals: Counter = Counter()
    per_cell: Dict[str, Counter] = defaultdict(Counter)
    for entry in plan.entries:
        subject = reg.get(entry.sample_id).subject_id
        totals[subject] += 1
        per_cell[f"{entry.dataset_id}:{entry.bin_index}"][subject] += 1
    return {
        "totals": dict(sorted(totals.items())),
        "per_cell": {cell: dict(sorted(c.items())) for cell, c in sorted(per_cell.items())},
    }
