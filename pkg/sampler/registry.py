"""
Sample registry ingestion.

Filters raw manifest records to the shared gaze interval and head-pose
interval and reports what was dropped and why.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Union

from loguru import logger
from pydantic import ValidationError

from data.manifest import SampleRecord
from geometry.gaze import GazeAngles, GazeInterval

DROP_REASONS = ("gaze_interval", "head_pose_interval", "duplicate_id", "malformed")


@dataclass
class SampleRegistry:
    """Validated, interval-filtered samples keyed by sample_id."""

    records: Dict[str, SampleRecord] = field(default_factory=dict)
    drop_counts: Dict[str, int] = field(
        default_factory=lambda: {reason: 0 for reason in DROP_REASONS}
    )
    malformed: List[Dict[str, Any]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __contains__(self, sample_id: object) -> bool:
        return sample_id in self.records

    def __iter__(self) -> Iterator[SampleRecord]:
        return iter(self.records.values())

    def get(self, sample_id: str) -> SampleRecord:
        return self.records[sample_id]

    @property
    def datasets(self) -> List[str]:
        return sorted({r.dataset_id for r in self.records.values()})

    def summary(self) -> Dict[str, Any]:
        return {
            "retained": len(self.records),
            "dropped": dict(self.drop_counts),
            "malformed": len(self.malformed),
        }


def ingest(
    records: Iterable[Union[SampleRecord, Mapping[str, Any]]],
    interval: GazeInterval,
    head_interval: GazeInterval,
) -> SampleRegistry:
    """Build a registry, dropping records outside either interval."""
    reg = SampleRegistry()
    for position, raw in enumerate(records):
        if isinstance(raw, SampleRecord):
            record = raw
        else:
            try:
                record = SampleRecord.model_validate(raw)
            except ValidationError as e:
                reg.drop_counts["malformed"] += 1
                reg.malformed.append({"index": position, "reason": str(e.errors()[0]["msg"])})
                continue

        if record.sample_id in reg.records:
            reg.drop_counts["duplicate_id"] += 1
            reg.malformed.append(
                {"index": position, "reason": f"duplicate sample_id {record.sample_id}"}
            )
            continue
        if not interval.contains(record.gaze):
            reg.drop_counts["gaze_interval"] += 1
            continue
        if not head_interval.contains(GazeAngles(record.head_pitch, record.head_yaw)):
            reg.drop_counts["head_pose_interval"] += 1
            continue
        reg.records[record.sample_id] = record

    dropped = sum(reg.drop_counts.values())
    logger.info(f"Ingested {len(reg)} samples, dropped {dropped}: {reg.drop_counts}")
    return reg
