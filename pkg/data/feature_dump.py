"""
Feature dump reader and writer.

Layout: one JSON header line ``{"n": N, "d": d, "fields": [...]}``, a
newline, then N*d little-endian float32 values in row-major order. Row
metadata lives in a JSON Lines sidecar, one object per row.
"""

import json
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt
from loguru import logger

from data.manifest import read_jsonl, write_jsonl
from losses.features import FeatureBatch, FeatureMeta
from utils.exceptions import DataValidationError, MissingInputError

PathLike = Union[str, Path]

DTYPE = np.dtype("<f4")
META_FIELDS = [
    "sample_id",
    "view_index",
    "dataset_id",
    "subject_id",
    "glasses",
    "mask",
    "pitch",
    "yaw",
    "flip",
]


def sidecar_path(path: PathLike) -> Path:
    p = Path(path)
    return p.with_name(p.name + ".meta.jsonl")


def write_feature_dump(
    path: PathLike,
    features: npt.ArrayLike,
    meta: Sequence[FeatureMeta],
    sidecar: Optional[PathLike] = None,
) -> Tuple[Path, Path]:
    z = np.asarray(features, dtype=np.float64)
    if z.ndim != 2 or z.shape[0] != len(meta):
        raise DataValidationError(
            f"Need an N x d matrix with one metadata row each, got {z.shape} and {len(meta)}"
        )
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    header = {"n": int(z.shape[0]), "d": int(z.shape[1]), "fields": META_FIELDS}
    with p.open("wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode("utf-8") + b"\n")
        fh.write(z.astype(DTYPE).tobytes(order="C"))
    meta_path, _ = write_jsonl(sidecar or sidecar_path(p), (m.to_json() for m in meta))
    return p, meta_path


def read_feature_dump(
    path: PathLike, sidecar: Optional[PathLike] = None
) -> Tuple[npt.NDArray[np.float64], Tuple[FeatureMeta, ...]]:
    """Raw features as float64 and their metadata rows."""
    p = Path(path)
    if not p.exists():
        raise MissingInputError(f"Feature dump not found: {p}", path=str(p))
    raw = p.read_bytes()
    head, sep, body = raw.partition(b"\n")
    try:
        header = json.loads(head.decode("utf-8"))
        n, d = int(header["n"]), int(header["d"])
    except (ValueError, KeyError, TypeError) as e:
        raise DataValidationError(f"Invalid feature dump header in {p}: {e}") from e
    if not sep or n < 0 or d < 0 or len(body) != n * d * DTYPE.itemsize:
        raise DataValidationError(
            f"Feature dump {p} holds {len(body)} bytes; header declares {n} x {d} float32"
        )

    rows = read_jsonl(sidecar or sidecar_path(p))
    if len(rows) != n:
        raise DataValidationError(f"Sidecar has {len(rows)} rows, dump has {n}")
    try:
        meta = tuple(FeatureMeta.from_json(r) for r in rows)
    except (KeyError, ValueError, TypeError) as e:
        raise DataValidationError(f"Invalid feature metadata: {e}") from e

    z = np.frombuffer(body, dtype=DTYPE).reshape(n, d).astype(np.float64)
    if not np.all(np.isfinite(z)):
        raise DataValidationError(f"Feature dump {p} contains non-finite values")
    logger.debug(f"Read {n} x {d} features from {p}")
    return z, meta


def load_feature_batch(path: PathLike, sidecar: Optional[PathLike] = None) -> FeatureBatch:
    """Read a dump and normalize its rows."""
    z, meta = read_feature_dump(path, sidecar)
    return FeatureBatch.from_raw(z, meta)
