"""
Synthetic sample generation.

Builds cartoon faces with a complete landmark set, portrait mattes, eye
scenes with a known iris disk, and ready-to-use JSONL manifests. Used by
the test-suite and for smoke-testing the command-line tools without real
datasets.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from loguru import logger

from data.manifest import dump_jsonl_line, write_jsonl
from imgcore.io import write_png
from imgcore.landmarks import LandmarkConfig
from imgcore.raster import fill_polygon
from imgcore.types import BinaryMask, ImageBuffer, LandmarkSet
from utils.seeding import rng_for

PathLike = Union[str, Path]


def _ellipse(cx: float, cy: float, a: float, b: float, n: int, mirror: bool) -> np.ndarray:
    """n points starting at the outer corner, upper lid first."""
    theta = np.pi - 2.0 * np.pi * np.arange(n) / n
    sign = -1.0 if mirror else 1.0
    return np.column_stack([cx + sign * a * np.cos(theta), cy - b * np.sin(theta)])


def synthetic_landmarks(
    width: int, height: int, config: Optional[LandmarkConfig] = None
) -> LandmarkSet:
    """Landmarks of a frontal cartoon face filling a (height, width) frame."""
    cfg = config or LandmarkConfig()
    eye_y = 0.42 * height
    points: Dict[int, Tuple[float, float]] = {}

    for side, cx, mirror in (("right", 0.32 * width, False), ("left", 0.68 * width, True)):
        inner = cfg.inner_eye(side)
        region = cfg.eye_region(side)
        for i, p in zip(inner, _ellipse(cx, eye_y, 0.09 * width, 0.05 * height, len(inner), mirror)):
            points[i] = (float(p[0]), float(p[1]))
        for i, p in zip(region, _ellipse(cx, eye_y, 0.1 * width, 0.06 * height, len(region), mirror)):
            points[i] = (float(p[0]), float(p[1]))

    above_below = [
        (cfg.glasses_anchors[0], 0.32, -0.11),
        (cfg.glasses_anchors[1], 0.32, 0.11),
        (cfg.glasses_anchors[2], 0.68, -0.11),
        (cfg.glasses_anchors[3], 0.68, 0.11),
    ]
    for idx, fx, dy in above_below:
        points[idx] = (fx * width, eye_y + dy * height)

    outline = [
        (0.10, 0.55), (0.28, 0.55), (0.50, 0.50), (0.72, 0.55),
        (0.90, 0.55), (0.88, 0.72), (0.80, 0.85), (0.62, 0.95),
        (0.50, 0.97), (0.38, 0.95), (0.20, 0.85), (0.12, 0.72),
    ]
    for idx, (fx, fy) in zip(cfg.mask_polygon, outline):
        points[idx] = (fx * width, fy * height)
    return LandmarkSet(points)


def face_matte(width: int, height: int) -> ImageBuffer:
    """Soft elliptical portrait matte."""
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    r = ((xx - 0.5 * width) / (0.45 * width)) ** 2 + ((yy - 0.55 * height) / (0.5 * height)) ** 2
    return np.clip(1.5 - r, 0.0, 1.0)


def synthetic_face(
    width: int,
    height: int,
    seed: int = 0,
    config: Optional[LandmarkConfig] = None,
) -> Tuple[ImageBuffer, LandmarkSet, ImageBuffer]:
    """Render a cartoon face; returns (image, landmarks, matte)."""
    cfg = config or LandmarkConfig()
    rng = rng_for(seed, "face")
    landmarks = synthetic_landmarks(width, height, cfg)
    matte = face_matte(width, height)

    background = rng.uniform(0.0, 1.0, size=3)
    skin = rng.uniform(0.45, 0.85) * np.array([1.0, 0.8, 0.65])
    img = matte[..., None] * skin + (1.0 - matte[..., None]) * background

    for side in ("right", "left"):
        eye = fill_polygon(landmarks.array(cfg.inner_eye(side)), True, width, height)
        img[eye] = 0.92
        pts = landmarks.array(cfg.inner_eye(side))
        cx, cy = pts.mean(axis=0)
        radius = 0.4 * (pts[:, 1].max() - pts[:, 1].min()) + 0.5
        yy, xx = np.mgrid[0:height, 0:width]
        iris = ((xx - cx) ** 2 + (yy - cy) ** 2 <= radius**2) & eye
        img[iris] = rng.uniform(0.05, 0.3)
    img = img + 0.02 * rng.standard_normal((height, width, 1))
    return np.clip(img, 0.0, 1.0), landmarks, matte


@dataclass(frozen=True)
class EyeScene:
    image: ImageBuffer
    inner_mask: BinaryMask
    iris: BinaryMask


def eye_scene(
    width: int,
    height: Optional[int] = None,
    sclera: float = 0.9,
    iris_luma: float = 0.2,
    skin: float = 0.6,
    iris_fraction: float = 0.5,
    offset: Tuple[float, float] = (0.0, 0.0),
    noise: float = 0.0,
    seed: int = 0,
) -> EyeScene:
    """An eye crop: bright sclera ellipse holding one dark iris disk.

    ``iris_fraction`` is the iris diameter relative to the ellipse height;
    ``offset`` shifts the iris by a fraction of the ellipse semi-axes.
    """
    height = height or max(8, int(round(0.6 * width)))
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    cx, cy = (width - 1) / 2.0, (height - 1) / 2.0
    a, b = 0.36 * width, 0.3 * height
    inner = ((xx - cx) / a) ** 2 + ((yy - cy) / b) ** 2 <= 1.0

    ix, iy = cx + offset[0] * a, cy + offset[1] * b
    radius = iris_fraction * b
    iris = ((xx - ix) ** 2 + (yy - iy) ** 2 <= radius**2) & inner

    img = np.full((height, width), skin)
    img[inner] = sclera
    img[iris] = iris_luma
    if noise > 0:
        img = img + noise * rng_for(seed, "eye").standard_normal(img.shape)
    rgb = np.repeat(np.clip(img, 0.0, 1.0)[..., None], 3, axis=2)
    return EyeScene(image=rgb, inner_mask=inner, iris=iris)


class SyntheticDataBuilder:
    """Writes synthetic samples and a manifest to a directory."""

    DATASETS = ("X", "N", "C")

    def __init__(self, root: PathLike, width: int = 64, height: int = 64, seed: int = 0):
        self.root = Path(root)
        self.width = width
        self.height = height
        self.seed = seed

    def build_manifest(
        self,
        n: int,
        with_assets: bool = True,
        subjects: int = 4,
        interval: Tuple[float, float, float, float] = (-30.0, 14.0, -26.0, 26.0),
    ) -> Path:
        """Write ``n`` samples and return the manifest path."""
        self.root.mkdir(parents=True, exist_ok=True)
        rng = rng_for(self.seed, "manifest")
        rows: List[Dict[str, Any]] = []
        for i in range(n):
            sample_id = f"s{i:05d}"
            row: Dict[str, Any] = {
                "sample_id": sample_id,
                "dataset_id": self.DATASETS[i % len(self.DATASETS)],
                "subject_id": f"p{i % subjects}",
                "pitch": round(float(rng.uniform(interval[0], interval[1])), 3),
                "yaw": round(float(rng.uniform(interval[2], interval[3])), 3),
                "head_pitch": round(float(rng.uniform(-20, 20)), 3),
                "head_yaw": round(float(rng.uniform(-20, 20)), 3),
            }
            if with_assets:
                img, landmarks, matte = synthetic_face(
                    self.width, self.height, seed=self.seed * 100003 + i
                )
                write_png(self.root / "images" / f"{sample_id}.png", img)
                write_png(self.root / "mattes" / f"{sample_id}.png", matte)
                lm_path = self.root / "landmarks" / f"{sample_id}.json"
                lm_path.parent.mkdir(parents=True, exist_ok=True)
                lm_path.write_text(dump_jsonl_line(landmarks.to_json()) + "\n", encoding="utf-8")
                row.update(
                    image=f"images/{sample_id}.png",
                    matte=f"mattes/{sample_id}.png",
                    landmarks=f"landmarks/{sample_id}.json",
                )
            rows.append(row)

        path, count = write_jsonl(self.root / "manifest.jsonl", rows)
        logger.info(f"Synthetic manifest with {count} samples written to {path}")
        return path
