"""
Run configuration.

One JSON document holds every experiment constant: gaze and head-pose
intervals, the bin grid, sampling quota, augmentation protocol, loss
weights, screen geometry, annotation and landmark settings, calibration
and evaluation options. Every node rejects unknown keys.

Resolution order: explicit path, then ``GAZEFORGE_CONFIG``, then the
shipped ``defaults.json``.
"""

import json
from pathlib import Path
from typing import List, Literal, Optional, Union

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from annotate.labels import AnnotateConfig
from augment.protocol import AugmentSettings
from config.settings import get_settings
from geometry.gaze import GazeInterval
from geometry.screen import ScreenGeometry
from gridcodec.grid import GridSpec
from imgcore.landmarks import LandmarkConfig
from losses.weights import LossWeights
from sampler.planner import EmptyCellPolicy
from utils.exceptions import ConfigSchemaError, MissingInputError

PathLike = Union[str, Path]

SCHEMA_VERSION = 1
DEFAULTS_FILE = Path(__file__).with_name("defaults.json")


class _Node(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GridConfig(_Node):
    bin_size_pitch: float = Field(default=4.0, gt=0)
    bin_size_yaw: float = Field(default=4.0, gt=0)
    softmax_temperature: float = Field(default=0.5, gt=0)


class SamplerConfig(_Node):
    quota: int = Field(default=640, ge=1, description="Draws per (dataset, bin) cell")
    empty_cell_policy: EmptyCellPolicy = EmptyCellPolicy.ERROR
    subject_balanced: List[str] = Field(default_factory=lambda: ["C"])
    datasets: List[Literal["X", "N", "C"]] = Field(default_factory=lambda: ["X", "N", "C"])


class CalibrationConfig(_Node):
    center_k: int = Field(default=3, ge=1, description="Samples averaged per calibration point")
    repetitions: int = Field(default=9, ge=1)
    group_by: Literal["session", "subject"] = "session"


class EvaluationConfig(_Node):
    clamp: bool = True
    exclude_reduced: bool = False
    pitch_tolerance: float = Field(default=10.0, gt=0)
    other_tolerance: float = Field(default=5.0, gt=0)


class PathsConfig(_Node):
    manifest: Optional[str] = None
    out: Optional[str] = None


class RunConfig(_Node):
    schema_version: Literal[1] = SCHEMA_VERSION
    interval: GazeInterval = Field(default_factory=GazeInterval)
    head_pose_interval: GazeInterval = Field(default_factory=GazeInterval.head_pose_default)
    grid: GridConfig = Field(default_factory=GridConfig)
    sampler: SamplerConfig = Field(default_factory=SamplerConfig)
    augment: AugmentSettings = Field(default_factory=AugmentSettings)
    losses: LossWeights = Field(default_factory=LossWeights)
    screen: ScreenGeometry = Field(default_factory=ScreenGeometry)
    annotate: AnnotateConfig = Field(default_factory=AnnotateConfig)
    landmarks: LandmarkConfig = Field(default_factory=LandmarkConfig)
    calibration: CalibrationConfig = Field(default_factory=CalibrationConfig)
    evaluation: EvaluationConfig = Field(default_factory=EvaluationConfig)
    seed: int = Field(default=0, ge=0)
    paths: PathsConfig = Field(default_factory=PathsConfig)

    def grid_spec(self) -> GridSpec:
        return GridSpec(
            interval=self.interval,
            bin_size_pitch=self.grid.bin_size_pitch,
            bin_size_yaw=self.grid.bin_size_yaw,
            softmax_temperature=self.grid.softmax_temperature,
        )

    @property
    def eval_interval(self) -> Optional[GazeInterval]:
        return self.interval if self.evaluation.clamp else None


def parse_run_config(payload: object, source: str = "<memory>") -> RunConfig:
    """Validate a decoded JSON document."""
    try:
        config = RunConfig.model_validate(payload)
        config.grid_spec()
    except ValidationError as e:
        problems = [
            {"loc": ".".join(str(x) for x in err["loc"]), "msg": err["msg"]} for err in e.errors()
        ]
        raise ConfigSchemaError(
            f"Invalid run configuration {source}: "
            + "; ".join(f"{p['loc']}: {p['msg']}" for p in problems),
            validation_errors=problems,
        ) from e
    return config


def resolve_config_path(path: Optional[PathLike] = None) -> Path:
    if path is not None:
        return Path(path)
    env_path = get_settings().config
    return env_path if env_path is not None else DEFAULTS_FILE


def load_run_config(path: Optional[PathLike] = None) -> RunConfig:
    p = resolve_config_path(path)
    if not p.exists():
        raise MissingInputError(f"Configuration file not found: {p}", path=str(p))
    try:
        payload = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigSchemaError(f"Configuration {p} is not valid JSON: {e}") from e
    config = parse_run_config(payload, str(p))
    logger.debug(f"Loaded run configuration from {p}")
    return config


def dump_run_config(config: RunConfig) -> str:
    return json.dumps(config.model_dump(mode="json"), indent=2) + "\n"
