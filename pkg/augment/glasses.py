"""
Pose-consistent eyeglasses synthesis.

A template library holds RGBA overlays of glasses rendered at discrete
head poses, each with a lens-region mask and the pixel positions of the
anchor landmarks of the face it was rendered on. For a target face the
template closest in head pose is selected, mirrored for negative yaw,
fitted to the face's anchors with a least-squares similarity transform and
alpha-blended with randomized scale, frame color, opacity and lens
reflection.

Library layout: one JSON file per template,

    {"name": "t01", "pitch": 0, "yaw": 9,
     "overlay": "t01.png", "lens": "t01_lens.png",
     "anchors": {"223": [x, y], "230": [x, y], "443": [x, y], "450": [x, y]}}

with the overlay and lens paths relative to the JSON file.
"""

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from augment.protocol import GlassesRange
from geometry.gaze import GazeAngles
from imgcore.filters import resize
from imgcore.io import read_mask, read_rgba
from imgcore.landmarks import GLASSES_ANCHORS
from imgcore.rigid import SimilarityTransform, fit_rigid, warp_image
from imgcore.types import ImageBuffer, LandmarkSet, as_image, clamp01
from utils.exceptions import DataValidationError, InsufficientDataError, MissingInputError

PathLike = Union[str, Path]


@dataclass(frozen=True)
class GlassesTemplate:
    """One rendered glasses overlay and its anchor landmarks."""

    name: str
    rgb: ImageBuffer
    alpha: ImageBuffer
    lens: ImageBuffer
    anchors: LandmarkSet
    pitch: float
    yaw: float

    def __post_init__(self) -> None:
        h, w = self.alpha.shape
        if self.rgb.shape[:2] != (h, w) or self.lens.shape != (h, w):
            raise DataValidationError(f"Template {self.name}: layer sizes differ")
        for idx, (x, y) in self.anchors.points.items():
            if not (0 <= x <= w - 1 and 0 <= y <= h - 1):
                raise DataValidationError(
                    f"Template {self.name}: anchor {idx} at ({x}, {y}) lies outside the overlay"
                )

    @property
    def size(self) -> Tuple[int, int]:
        return self.alpha.shape

    def mirrored(self, mirror_pairs: Sequence[Tuple[int, int]]) -> "GlassesTemplate":
        width = self.alpha.shape[1]
        return replace(
            self,
            rgb=np.ascontiguousarray(self.rgb[:, ::-1]),
            alpha=np.ascontiguousarray(self.alpha[:, ::-1]),
            lens=np.ascontiguousarray(self.lens[:, ::-1]),
            anchors=self.anchors.mirrored(width, mirror_pairs),
            yaw=-self.yaw,
        )


def load_template(path: PathLike) -> GlassesTemplate:
    p = Path(path)
    if not p.exists():
        raise MissingInputError(f"Template descriptor not found: {p}", path=str(p))
    try:
        meta = json.loads(p.read_text(encoding="utf-8"))
        rgb, alpha = read_rgba(p.parent / meta["overlay"])
        lens = read_mask(p.parent / meta["lens"]).astype(np.float64)
        return GlassesTemplate(
            name=str(meta.get("name", p.stem)),
            rgb=rgb,
            alpha=alpha,
            lens=lens,
            anchors=LandmarkSet.from_json(meta["anchors"]),
            pitch=float(meta["pitch"]),
            yaw=float(meta["yaw"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise DataValidationError(f"Invalid template descriptor {p}: {e}") from e


def load_library(directory: PathLike) -> List[GlassesTemplate]:
    """Load every ``*.json`` template descriptor in a directory, sorted by name."""
    root = Path(directory)
    if not root.is_dir():
        raise MissingInputError(f"Template library not found: {root}", path=str(root))
    library = [load_template(p) for p in sorted(root.glob("*.json"))]
    if not library:
        raise InsufficientDataError(
            f"No glasses templates in {root}", required=1, available=0
        )
    logger.info(f"Loaded {len(library)} glasses templates from {root}")
    return library


def select_template(
    library: Sequence[GlassesTemplate],
    head_pose: GazeAngles,
    mirror_pairs: Sequence[Tuple[int, int]] = (),
) -> Tuple[GlassesTemplate, bool]:
    """Nearest template in (pitch, |yaw|); mirrored when the face yaw is negative.

    Ties keep library order.
    """
    if not library:
        raise InsufficientDataError("Glasses template library is empty", required=1, available=0)
    target = np.array([head_pose.pitch, abs(head_pose.yaw)])
    poses = np.array([[t.pitch, t.yaw] for t in library])
    best = library[int(np.argmin(np.linalg.norm(poses - target, axis=1)))]
    if head_pose.yaw < 0:
        return best.mirrored(mirror_pairs), True
    return best, False


def fit_template(
    template: GlassesTemplate,
    landmarks: LandmarkSet,
    anchor_ids: Sequence[int] = GLASSES_ANCHORS,
) -> SimilarityTransform:
    """Similarity transform taking template pixels onto the face image."""
    dst = landmarks.array(anchor_ids)
    src = template.anchors.array(anchor_ids)
    return fit_rigid(src, dst, allow_scale=True)


def _uniform(rng: np.random.Generator, bounds: Tuple[float, float]) -> float:
    return float(rng.uniform(bounds[0], bounds[1]))


def glasses_synthesis(
    img: ImageBuffer,
    landmarks: LandmarkSet,
    head_pose: GazeAngles,
    library: Sequence[GlassesTemplate],
    rng: np.random.Generator,
    params: Optional[GlassesRange] = None,
    anchor_ids: Sequence[int] = GLASSES_ANCHORS,
    mirror_pairs: Sequence[Tuple[int, int]] = (),
    reflections: Sequence[ImageBuffer] = (),
) -> Tuple[ImageBuffer, bool]:
    """Render glasses onto a face image; returns (image, glasses_flag)."""
    params = params or GlassesRange()
    rgb = as_image(img, channels=(3,))
    h, w = rgb.shape[:2]
    center = landmarks.array(anchor_ids).mean(axis=0)

    template, was_mirrored = select_template(library, head_pose, mirror_pairs)
    transform = fit_template(template, landmarks, anchor_ids)
    transform = transform.scaled_about(_uniform(rng, params.scale), center)
    logger.debug(
        f"Template {template.name} (mirrored={was_mirrored}) fitted, "
        f"residual {transform.residual:.2f}px"
    )

    color = rng.uniform(0.0, 1.0, size=3)
    tint = _uniform(rng, params.frame_tint)
    opacity = _uniform(rng, params.opacity)
    frame = (1.0 - tint) * template.rgb + tint * color.reshape(1, 1, 3)

    frame_w = warp_image(frame, transform, h, w)
    alpha_w = np.clip(warp_image(template.alpha, transform, h, w), 0.0, 1.0)[..., None] * opacity
    out = rgb * (1.0 - alpha_w) + frame_w * alpha_w

    if reflections:
        scene = reflections[int(rng.integers(len(reflections)))]
        scene = resize(as_image(scene, channels=(3,)), h, w)
        strength = _uniform(rng, params.reflection_opacity)
        lens_w = np.clip(warp_image(template.lens, transform, h, w), 0.0, 1.0)[..., None]
        r = strength * lens_w
        out = out * (1.0 - r) + scene * r

    return clamp01(out), True
