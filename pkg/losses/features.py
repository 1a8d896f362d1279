"""
Feature batches for contrastive objectives.

A batch pairs an N x d embedding matrix with per-row metadata describing
the view it came from. Rows of a FeatureBatch are unit-norm.
"""

from dataclasses import dataclass, field
from typing import Iterable, List, Literal, Mapping, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from utils.exceptions import DataValidationError

DatasetId = Literal["X", "N", "C"]
DATASET_IDS: Tuple[str, ...] = ("X", "N", "C")

UNIT_NORM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class FeatureMeta:
    """Metadata of one row of a feature batch."""

    sample_id: str
    view_index: int = 0
    dataset_id: str = "X"
    subject_id: str = ""
    glasses: bool = False
    mask: bool = False
    pitch: float = 0.0
    yaw: float = 0.0
    flip: bool = False

    def __post_init__(self) -> None:
        if self.dataset_id not in DATASET_IDS:
            raise DataValidationError(
                f"Unknown dataset id {self.dataset_id!r}; expected one of {DATASET_IDS}"
            )

    @classmethod
    def from_json(cls, payload: Mapping) -> "FeatureMeta":
        return cls(
            sample_id=str(payload["sample_id"]),
            view_index=int(payload.get("view_index", 0)),
            dataset_id=str(payload.get("dataset_id", "X")),
            subject_id=str(payload.get("subject_id", "")),
            glasses=bool(payload.get("glasses", False)),
            mask=bool(payload.get("mask", False)),
            pitch=float(payload["pitch"]),
            yaw=float(payload["yaw"]),
            flip=bool(payload.get("flip", False)),
        )

    def to_json(self) -> dict:
        return {
            "sample_id": self.sample_id,
            "view_index": self.view_index,
            "dataset_id": self.dataset_id,
            "subject_id": self.subject_id,
            "glasses": self.glasses,
            "mask": self.mask,
            "pitch": self.pitch,
            "yaw": self.yaw,
            "flip": self.flip,
        }


def normalize_rows(v: npt.ArrayLike) -> npt.NDArray[np.float64]:
    arr = np.asarray(v, dtype=np.float64)
    norms = np.linalg.norm(arr, axis=1, keepdims=True)
    if np.any(norms == 0.0):
        raise DataValidationError("Cannot normalize a zero feature vector")
    return arr / norms


@dataclass(frozen=True)
class FeatureBatch:
    """Unit-norm embeddings with per-row metadata."""

    features: npt.NDArray[np.float64]
    meta: Tuple[FeatureMeta, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        z = np.asarray(self.features, dtype=np.float64)
        if z.ndim != 2:
            raise DataValidationError(f"Features must be N x d, got shape {z.shape}")
        if len(self.meta) != z.shape[0]:
            raise DataValidationError(
                f"{z.shape[0]} feature rows but {len(self.meta)} metadata rows"
            )
        norms = np.linalg.norm(z, axis=1)
        if z.size and np.max(np.abs(norms - 1.0)) > UNIT_NORM_TOLERANCE:
            raise DataValidationError("Feature rows must be unit-norm")
        object.__setattr__(self, "features", z)
        object.__setattr__(self, "meta", tuple(self.meta))

    @classmethod
    def from_raw(cls, raw: npt.ArrayLike, meta: Iterable[FeatureMeta]) -> "FeatureBatch":
        """Normalize raw projection-head outputs into a batch."""
        return cls(normalize_rows(raw), tuple(meta))

    @classmethod
    def labels_only(cls, meta: Sequence[FeatureMeta]) -> "FeatureBatch":
        """A batch carrying metadata only, for building pair masks."""
        return cls(np.zeros((len(meta), 0)), tuple(meta))

    def __len__(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    @property
    def labels(self) -> npt.NDArray[np.float64]:
        """(N, 2) pitch/yaw labels."""
        return np.array([(m.pitch, m.yaw) for m in self.meta], dtype=np.float64).reshape(
            -1, 2
        )

    @property
    def dataset_ids(self) -> List[str]:
        return [m.dataset_id for m in self.meta]

    @property
    def sample_ids(self) -> List[str]:
        return [m.sample_id for m in self.meta]

    def flags(self, which: str) -> npt.NDArray[np.bool_]:
        if which not in ("glasses", "mask"):
            raise ValueError(f"Unknown accessory flag {which!r}")
        return np.array([getattr(m, which) for m in self.meta], dtype=bool)
