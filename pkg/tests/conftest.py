"""
Pytest configuration and fixtures for gazeforge.

Provides environment isolation for process settings, synthetic sample
manifests and prediction files shared by unit and integration tests.
"""

import os
import sys
from pathlib import Path

import numpy as np
import pandas as pd
import pytest
from loguru import logger

# Add project root to Python path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from config.settings import get_settings, reset_settings
from data.synthetic import SyntheticDataBuilder
from evalbench.sessions import SESSIONS

ENV_KEYS = ("GAZEFORGE_CONFIG", "GAZEFORGE_LOG_LEVEL", "GAZEFORGE_LOG_FILE", "GAZEFORGE_WORKERS")


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    """Run every test without inherited GAZEFORGE_ variables or a stray .env."""
    for key in ENV_KEYS:
        monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture(autouse=True)
def reset_loguru():
    """Drop sinks bound to captured streams once a test ends."""
    yield
    logger.remove()
    logger.add(lambda message: sys.stderr.write(message), level="WARNING")


@pytest.fixture
def test_settings(monkeypatch):
    """Settings built from a known environment."""
    monkeypatch.setenv("GAZEFORGE_LOG_LEVEL", "debug")
    monkeypatch.setenv("GAZEFORGE_WORKERS", "2")
    reset_settings()
    return get_settings()


@pytest.fixture
def synthetic_manifest(tmp_path):
    """A 12-sample manifest with 32 x 32 faces, mattes and landmarks."""
    return SyntheticDataBuilder(tmp_path / "src", 32, 32, seed=1).build_manifest(12)


@pytest.fixture
def screen_predictions_csv(tmp_path):
    """Screen predictions for 4 subjects over all 9 sessions, 20 samples each.

    Predictions are ground truth shifted by (+5, -3) mm plus small noise.
    """
    rng = np.random.default_rng(0)
    rows = []
    for s in range(4):
        for session in SESSIONS:
            for i in range(20):
                gx, gy = rng.uniform(0, 250), rng.uniform(0, 170)
                rows.append(
                    {
                        "sample_id": f"p{s}_{session}_{i:03d}",
                        "pred_x_mm": gx + 5.0 + rng.normal(0, 0.5),
                        "pred_y_mm": gy - 3.0 + rng.normal(0, 0.5),
                        "gt_x_mm": gx,
                        "gt_y_mm": gy,
                        "subject": f"p{s}",
                        "session": session,
                    }
                )
    path = tmp_path / "screen_pred.csv"
    pd.DataFrame(rows).to_csv(path, index=False)
    return path


@pytest.fixture
def temp_data_dir(tmp_path):
    """Temporary data directory fixture."""
    data_dir = tmp_path / "data"
    data_dir.mkdir()
    return data_dir


@pytest.fixture
def env_config(monkeypatch, tmp_path):
    """Point GAZEFORGE_CONFIG at a file and return its path for the test to fill."""
    path = tmp_path / "env_config.json"
    monkeypatch.setenv("GAZEFORGE_CONFIG", os.fspath(path))
    reset_settings()
    return path
