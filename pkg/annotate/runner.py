"""
Batch annotation over a manifest.

Per sample, writes ``<sample_id>_<mask>.png`` for the four masks (empty
masks are written as all-zero images) and ``<sample_id>_seg.json`` with
the validity flags and per-side IoU. ``labels.jsonl`` collects the
validity records in manifest order.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
from loguru import logger

from annotate.labels import MASK_NAMES, AnnotateConfig, annotate_face
from data.manifest import (
    ManifestLoadResult,
    SampleRecord,
    dump_jsonl_line,
    load_landmarks,
    write_jsonl,
)
from imgcore.io import read_png, write_mask
from imgcore.landmarks import LandmarkConfig
from utils.exceptions import DataValidationError

PathLike = Union[str, Path]

LABELS_FILE = "labels.jsonl"


@dataclass
class AnnotateRunResult:
    out_dir: Path
    samples: int
    valid_counts: Dict[str, int] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return {
            "out_dir": str(self.out_dir),
            "samples": self.samples,
            "valid_counts": dict(self.valid_counts),
        }


def annotate_sample(
    record: SampleRecord,
    manifest: ManifestLoadResult,
    out_dir: Path,
    config: AnnotateConfig,
    landmark_config: LandmarkConfig,
) -> Dict[str, Any]:
    if record.image is None or record.landmarks is None:
        raise DataValidationError(
            f"Sample {record.sample_id} needs both an image and landmarks to annotate"
        )
    face = read_png(manifest.resolve(record.image))
    landmarks = load_landmarks(manifest.resolve(record.landmarks))
    label = annotate_face(face, landmarks, config, landmark_config)

    empty = np.zeros(face.shape[:2], dtype=bool)
    for name in MASK_NAMES:
        mask = label.mask(name)
        write_mask(out_dir / f"{record.sample_id}_{name}.png", empty if mask is None else mask)
    row = {"sample_id": record.sample_id, **label.to_json()}
    (out_dir / f"{record.sample_id}_seg.json").write_text(
        dump_jsonl_line(row) + "\n", encoding="utf-8"
    )
    return row


def run_annotate(
    manifest: ManifestLoadResult,
    out_dir: PathLike,
    config: AnnotateConfig = AnnotateConfig(),
    landmark_config: LandmarkConfig = LandmarkConfig(),
    workers: int = 1,
) -> AnnotateRunResult:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    job = partial(
        annotate_sample,
        manifest=manifest,
        out_dir=out,
        config=config,
        landmark_config=landmark_config,
    )
    logger.info(f"Annotating {len(manifest.records)} samples into {out}")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(job, manifest.records))
    else:
        rows = [job(r) for r in manifest.records]

    write_jsonl(out / LABELS_FILE, rows)
    counts = {name: sum(1 for r in rows if r["valid"][name]) for name in MASK_NAMES}
    logger.info(f"Annotated {len(rows)} samples; valid masks: {counts}")
    return AnnotateRunResult(out_dir=out, samples=len(rows), valid_counts=counts)
