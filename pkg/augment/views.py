"""
Multi-view construction.

Each sample yields ``views_per_sample`` augmented views. A view's random
stream is derived from (seed, sample_id, epoch, view_index) alone, so a
view set never depends on which worker builds it. Even-indexed views
(0-based) are always mirrored; every other method is applied by an
independent Bernoulli draw at its protocol probability, and all draws are
taken before any method runs.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from augment.glasses import GlassesTemplate, glasses_synthesis, load_library
from augment.mask import mask_synthesis
from augment.ops import (
    background_replace,
    blur,
    color_jitter,
    desaturate,
    fit_background,
    flip,
    illumination,
    sensor_noise,
)
from augment.protocol import METHODS, AssetPaths, AugmentProtocol, AugmentSettings
from geometry.gaze import GazeAngles
from imgcore.io import read_png
from imgcore.landmarks import LandmarkConfig
from imgcore.types import ImageBuffer, LandmarkSet, as_image, clamp01
from utils.exceptions import InvariantViolationError, MissingInputError
from utils.seeding import derive_seed

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")


@dataclass(frozen=True)
class AugmentSource:
    """A decoded sample ready for augmentation."""

    sample_id: str
    image: ImageBuffer
    gaze: GazeAngles
    head_pose: GazeAngles = GazeAngles(0.0, 0.0)
    landmarks: Optional[LandmarkSet] = None
    matte: Optional[np.ndarray] = None
    glasses: bool = False
    mask: bool = False


@dataclass(frozen=True)
class AugmentedView:
    """One augmented view and its labels.

    ``glasses_flag`` and ``mask_flag`` are the source sample's own flag OR'ed
    with whether that synthesis ran on this view, so a source already
    wearing the accessory keeps the flag and is never synthesized over.
    """

    image: ImageBuffer
    gaze: GazeAngles
    glasses_flag: bool
    mask_flag: bool
    flip_applied: bool
    view_index: int
    seed: int
    applied: Tuple[str, ...] = ()

    def to_json(self, sample_id: str) -> Dict[str, Any]:
        return {
            "sample_id": sample_id,
            "view_index": self.view_index,
            "pitch": self.gaze.pitch,
            "yaw": self.gaze.yaw,
            "glasses": self.glasses_flag,
            "mask": self.mask_flag,
            "flip": self.flip_applied,
            "seed": self.seed,
            "applied": list(self.applied),
        }


@dataclass
class AugmentAssets:
    """Images used by the synthesis methods; empty lists disable a method."""

    glasses: List[GlassesTemplate] = field(default_factory=list)
    backgrounds: List[ImageBuffer] = field(default_factory=list)
    reflections: List[ImageBuffer] = field(default_factory=list)
    mask_textures: List[ImageBuffer] = field(default_factory=list)


def load_images(directory: Optional[str]) -> List[ImageBuffer]:
    if directory is None:
        return []
    root = Path(directory)
    if not root.is_dir():
        raise MissingInputError(f"Asset directory not found: {root}", path=str(root))
    paths = sorted(p for p in root.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES)
    return [read_png(p) for p in paths]


def load_assets(paths: AssetPaths) -> AugmentAssets:
    assets = AugmentAssets(
        glasses=load_library(paths.glasses_templates) if paths.glasses_templates else [],
        backgrounds=load_images(paths.backgrounds),
        reflections=load_images(paths.reflections or paths.backgrounds),
        mask_textures=load_images(paths.mask_textures),
    )
    logger.info(
        f"Assets: {len(assets.glasses)} glasses templates, "
        f"{len(assets.backgrounds)} backgrounds, {len(assets.reflections)} reflections, "
        f"{len(assets.mask_textures)} mask textures"
    )
    return assets


def view_seed(seed: int, sample_id: str, epoch: int, view_index: int) -> int:
    return derive_seed(seed, sample_id, epoch, view_index)


def draw_methods(rng: np.random.Generator, protocol: AugmentProtocol) -> Dict[str, bool]:
    """One Bernoulli draw per method, in ``METHODS`` order."""
    probs = protocol.probabilities()
    return {m: bool(rng.random() < probs[m]) for m in METHODS}


def _span(rng: np.random.Generator, bounds: Tuple[float, float]) -> float:
    return float(rng.uniform(bounds[0], bounds[1]))


def build_view(
    source: AugmentSource,
    view_index: int,
    settings: AugmentSettings,
    seed: int,
    epoch: int = 0,
    assets: Optional[AugmentAssets] = None,
    landmark_config: Optional[LandmarkConfig] = None,
) -> AugmentedView:
    assets = assets or AugmentAssets()
    lmk = landmark_config or LandmarkConfig()
    pairs = lmk.mirror_pairs

    vseed = view_seed(seed, source.sample_id, epoch, view_index)
    rng = np.random.default_rng(vseed)
    draws = draw_methods(rng, settings.protocol)

    img = as_image(source.image, channels=(3,))
    landmarks, gaze, head, matte = source.landmarks, source.gaze, source.head_pose, source.matte
    h, w = img.shape[:2]
    applied: List[str] = []

    flipped = view_index % 2 == 0
    if flipped:
        img, landmarks, gaze = flip(img, landmarks, gaze, pairs)
        head = GazeAngles(head.pitch, -head.yaw)
        if matte is not None:
            matte = np.ascontiguousarray(np.asarray(matte)[:, ::-1])

    if draws["background"] and matte is not None and assets.backgrounds:
        bg = assets.backgrounds[int(rng.integers(len(assets.backgrounds)))]
        img = background_replace(img, matte, fit_background(bg, h, w))
        applied.append("background")

    if draws["glasses"] and not source.glasses and landmarks is not None and assets.glasses:
        img, _ = glasses_synthesis(
            img,
            landmarks,
            head,
            assets.glasses,
            rng,
            params=settings.glasses,
            anchor_ids=lmk.glasses_anchors,
            mirror_pairs=pairs,
            reflections=assets.reflections,
        )
        applied.append("glasses")

    if draws["mask"] and not source.mask and landmarks is not None:
        if rng.random() < settings.mask_fill.solid_probability or not assets.mask_textures:
            fill = rng.uniform(0.0, 1.0, size=3)
        else:
            fill = assets.mask_textures[int(rng.integers(len(assets.mask_textures)))]
        img, _ = mask_synthesis(img, landmarks, fill, lmk.mask_polygon, settings.mask_fill.smooth)
        applied.append("mask")

    if draws["illumination"]:
        tint = rng.uniform(settings.illumination.tint_floor, 1.0, size=3)
        img = illumination(
            img, _span(rng, (0.0, 360.0)), _span(rng, settings.illumination.opacity), tint
        )
        applied.append("illumination")

    if draws["color_jitter"]:
        gain = rng.uniform(settings.jitter.gain[0], settings.jitter.gain[1], size=3)
        offset = _span(rng, (-settings.jitter.offset, settings.jitter.offset))
        img = color_jitter(img, gain, offset)
        applied.append("color_jitter")

    if draws["sensor_noise"]:
        noise = settings.noise
        img = sensor_noise(img, noise.alpha_y, noise.alpha_c, noise.blotch, seed=rng)
        applied.append("sensor_noise")

    if draws["blur"]:
        img = blur(img, _span(rng, settings.blur.sigma))
        applied.append("blur")

    if draws["desaturation"]:
        img = desaturate(img, _span(rng, settings.desaturation.amount))
        applied.append("desaturation")

    img = clamp01(img)
    if not np.all(np.isfinite(img)):
        raise InvariantViolationError(
            f"View {view_index} of {source.sample_id} has non-finite pixels",
            invariant="finite_output",
        )

    return AugmentedView(
        image=img,
        gaze=gaze,
        glasses_flag=source.glasses or "glasses" in applied,
        mask_flag=source.mask or "mask" in applied,
        flip_applied=flipped,
        view_index=view_index,
        seed=vseed,
        applied=tuple(applied),
    )


def build_views(
    source: AugmentSource,
    settings: Optional[AugmentSettings] = None,
    seed: int = 0,
    epoch: int = 0,
    assets: Optional[AugmentAssets] = None,
    landmark_config: Optional[LandmarkConfig] = None,
) -> List[AugmentedView]:
    """Build every view of one sample."""
    settings = settings or AugmentSettings()
    return [
        build_view(source, k, settings, seed, epoch, assets, landmark_config)
        for k in range(settings.protocol.views_per_sample)
    ]
