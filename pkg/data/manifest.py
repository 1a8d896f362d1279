"""
Sample manifest I/O.

A manifest is JSON Lines, one sample per line. Paths inside a line are
relative to the manifest's directory.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Optional, Tuple, Union

import pandas as pd
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from geometry.gaze import GazeAngles
from imgcore.types import LandmarkSet
from utils.exceptions import DataValidationError, MissingInputError

PathLike = Union[str, Path]


class SampleRecord(BaseModel):
    """One manifest line."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    sample_id: str = Field(..., min_length=1)
    image: Optional[str] = Field(default=None, description="Face image, relative path")
    dataset_id: Literal["X", "N", "C"] = "X"
    subject_id: str = ""
    pitch: float
    yaw: float
    head_pitch: float = 0.0
    head_yaw: float = 0.0
    head_roll: float = 0.0
    glasses: bool = False
    mask: bool = False
    landmarks: Optional[str] = Field(default=None, description="Landmark JSON path")
    matte: Optional[str] = Field(default=None, description="Portrait matte PNG path")
    session: Optional[str] = None

    @property
    def gaze(self) -> GazeAngles:
        return GazeAngles(self.pitch, self.yaw)

    @property
    def head_pose(self) -> GazeAngles:
        return GazeAngles(self.head_pitch, self.head_yaw)


@dataclass
class ManifestLoadResult:
    records: List[SampleRecord]
    malformed: List[Dict[str, Any]] = field(default_factory=list)
    base_dir: Path = Path(".")

    def resolve(self, relative: Optional[str]) -> Optional[Path]:
        if relative is None:
            return None
        p = Path(relative)
        return p if p.is_absolute() else self.base_dir / p


class ManifestLoader:
    """Loads and summarizes JSONL sample manifests."""

    def load(self, path: PathLike) -> ManifestLoadResult:
        """Parse every line; malformed lines are listed, not fatal."""
        p = Path(path)
        if not p.exists():
            raise MissingInputError(f"Manifest not found: {p}", path=str(p))

        records: List[SampleRecord] = []
        malformed: List[Dict[str, Any]] = []
        with p.open("r", encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    records.append(SampleRecord.model_validate_json(line))
                except ValidationError as e:
                    reason = "; ".join(
                        f"{'.'.join(str(x) for x in err['loc'])}: {err['msg']}"
                        for err in e.errors()
                    )
                    malformed.append({"line": line_no, "reason": reason})

        if malformed:
            logger.warning(f"{len(malformed)} malformed manifest line(s) in {p}")
        logger.info(f"Loaded {len(records)} samples from {p}")
        return ManifestLoadResult(records=records, malformed=malformed, base_dir=p.parent)

    def to_frame(self, records: Iterable[SampleRecord]) -> pd.DataFrame:
        return pd.DataFrame([r.model_dump() for r in records])

    def summarize(self, records: Iterable[SampleRecord]) -> Dict[str, Any]:
        """Counts per dataset and subject."""
        df = self.to_frame(records)
        if df.empty:
            return {"total_samples": 0, "per_dataset": {}, "subjects_per_dataset": {}}
        return {
            "total_samples": int(len(df)),
            "per_dataset": {k: int(v) for k, v in df["dataset_id"].value_counts().sort_index().items()},
            "subjects_per_dataset": {
                k: int(v)
                for k, v in df.groupby("dataset_id")["subject_id"].nunique().sort_index().items()
            },
            "glasses": int(df["glasses"].sum()),
            "mask": int(df["mask"].sum()),
        }


def load_landmarks(path: PathLike) -> LandmarkSet:
    p = Path(path)
    if not p.exists():
        raise MissingInputError(f"Landmark file not found: {p}", path=str(p))
    try:
        payload = json.loads(p.read_text(encoding="utf-8"))
        return LandmarkSet.from_json(payload)
    except (ValueError, KeyError, TypeError, IndexError) as e:
        raise DataValidationError(f"Invalid landmark file {p}: {e}") from e


def dump_jsonl_line(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_jsonl(path: PathLike, rows: Iterable[Any]) -> Tuple[Path, int]:
    """Write rows as sorted-key JSON lines; returns (path, count)."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with p.open("w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            if isinstance(row, BaseModel):
                row = row.model_dump()
            fh.write(dump_jsonl_line(row) + "\n")
            count += 1
    return p, count


def read_jsonl(path: PathLike) -> List[Dict[str, Any]]:
    p = Path(path)
    if not p.exists():
        raise MissingInputError(f"File not found: {p}", path=str(p))
    with p.open("r", encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]
