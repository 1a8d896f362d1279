"""
Batch augmentation over a manifest.

Samples are independent, so they are processed with a process pool when
more than one worker is requested. Each view is written as
``<out>/<sample_id>_v<k>.png`` and described by one line of
``<out>/views.jsonl``; lines follow manifest order whatever the worker
count.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from loguru import logger

from augment.protocol import AugmentSettings
from augment.views import AugmentAssets, AugmentSource, build_views
from data.manifest import ManifestLoadResult, SampleRecord, load_landmarks, write_jsonl
from imgcore.io import read_png, write_png
from imgcore.landmarks import LandmarkConfig
from utils.exceptions import DataValidationError

PathLike = Union[str, Path]

VIEWS_FILE = "views.jsonl"


@dataclass
class AugmentRunResult:
    out_dir: Path
    samples: int
    views: int
    metadata_path: Path

    def to_json(self) -> Dict[str, Any]:
        return {
            "out_dir": str(self.out_dir),
            "samples": self.samples,
            "views": self.views,
            "metadata": str(self.metadata_path),
        }


def load_source(record: SampleRecord, manifest: ManifestLoadResult) -> AugmentSource:
    """Decode the image, landmarks and matte referenced by a manifest record."""
    if record.image is None:
        raise DataValidationError(f"Sample {record.sample_id} has no image path")
    landmarks_path = manifest.resolve(record.landmarks)
    matte_path = manifest.resolve(record.matte)
    return AugmentSource(
        sample_id=record.sample_id,
        image=read_png(manifest.resolve(record.image)),
        gaze=record.gaze,
        head_pose=record.head_pose,
        landmarks=load_landmarks(landmarks_path) if landmarks_path else None,
        matte=read_png(matte_path, mode="L") if matte_path else None,
        glasses=record.glasses,
        mask=record.mask,
    )


def augment_sample(
    record: SampleRecord,
    manifest: ManifestLoadResult,
    out_dir: Path,
    settings: AugmentSettings,
    seed: int,
    epoch: int,
    assets: Optional[AugmentAssets],
    landmark_config: Optional[LandmarkConfig],
) -> List[Dict[str, Any]]:
    source = load_source(record, manifest)
    views = build_views(source, settings, seed, epoch, assets, landmark_config)
    rows = []
    for view in views:
        name = f"{record.sample_id}_v{view.view_index}.png"
        write_png(out_dir / name, view.image)
        row = view.to_json(record.sample_id)
        row.update(image=name, dataset_id=record.dataset_id, subject_id=record.subject_id)
        rows.append(row)
    return rows


def run_augment(
    manifest: ManifestLoadResult,
    out_dir: PathLike,
    settings: Optional[AugmentSettings] = None,
    seed: int = 0,
    epoch: int = 0,
    workers: int = 1,
    assets: Optional[AugmentAssets] = None,
    landmark_config: Optional[LandmarkConfig] = None,
) -> AugmentRunResult:
    """Augment every manifest record and write views plus metadata."""
    settings = settings or AugmentSettings()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    job = partial(
        augment_sample,
        manifest=manifest,
        out_dir=out,
        settings=settings,
        seed=seed,
        epoch=epoch,
        assets=assets,
        landmark_config=landmark_config,
    )

    logger.info(
        f"Augmenting {len(manifest.records)} samples into {out} with {workers} worker(s)"
    )
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            per_sample = list(executor.map(job, manifest.records))
    else:
        per_sample = [job(r) for r in manifest.records]

    rows = [row for sample_rows in per_sample for row in sample_rows]
    metadata_path, count = write_jsonl(out / VIEWS_FILE, rows)
    logger.info(f"Wrote {count} views for {len(per_sample)} samples")
    return AugmentRunResult(
        out_dir=out, samples=len(per_sample), views=count, metadata_path=metadata_path
    )
