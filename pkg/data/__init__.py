"""
Data I/O for gazeforge.

Sample manifests, prediction files, feature dumps and synthetic samples.
"""

from .feature_dump import load_feature_batch, read_feature_dump, write_feature_dump
from .manifest import (
    ManifestLoader,
    ManifestLoadResult,
    SampleRecord,
    load_landmarks,
    read_jsonl,
    write_jsonl,
)
from .predictions import PredictionLoader, load_pairs, load_predictions, write_pairs
from .synthetic import SyntheticDataBuilder, eye_scene, synthetic_face, synthetic_landmarks

__all__ = [
    "ManifestLoadResult",
    "ManifestLoader",
    "PredictionLoader",
    "SampleRecord",
    "SyntheticDataBuilder",
    "eye_scene",
    "load_feature_batch",
    "load_landmarks",
    "load_pairs",
    "load_predictions",
    "read_feature_dump",
    "read_jsonl",
    "synthetic_face",
    "synthetic_landmarks",
    "write_feature_dump",
    "write_jsonl",
    "write_pairs",
]
