"""
Unit tests for configuration module.

Tests process settings from the environment and run configuration
loading, validation and resolution.
"""

import json

import pytest

from config.run_config import (
    DEFAULTS_FILE,
    RunConfig,
    dump_run_config,
    load_run_config,
    parse_run_config,
    resolve_config_path,
)
from config.settings import Settings, get_settings, reset_settings
from sampler import EmptyCellPolicy
from utils.exceptions import ConfigSchemaError, ConfigurationError, MissingInputError

pytestmark = pytest.mark.unit


class TestSettings:
    """Test cases for Settings class."""

    def test_default_settings(self):
        """Test settings with default values."""
        settings = Settings()
        assert settings.config is None
        assert settings.log_level == "INFO"
        assert settings.workers == 1

    def test_environment_variables_loaded(self, test_settings):
        """Test GAZEFORGE_ variables are read and the level upper-cased."""
        assert test_settings.log_level == "DEBUG"
        assert test_settings.workers == 2

    def test_invalid_log_level(self, monkeypatch):
        """Test an unknown log level raises a configuration error."""
        monkeypatch.setenv("GAZEFORGE_LOG_LEVEL", "chatty")
        with pytest.raises(ConfigurationError):
            get_settings()

    def test_zero_workers_rejected(self, monkeypatch):
        """Test workers must be at least 1."""
        monkeypatch.setenv("GAZEFORGE_WORKERS", "0")
        with pytest.raises(ConfigurationError):
            get_settings()

    def test_cached_until_reset(self, monkeypatch):
        """Test the instance is reused until reset_settings is called."""
        first = get_settings()
        monkeypatch.setenv("GAZEFORGE_WORKERS", "3")
        assert get_settings() is first
        reset_settings()
        assert get_settings().workers == 3

    def test_dotenv_file(self, tmp_path):
        """Test a .env file in the working directory is honored."""
        (tmp_path / ".env").write_text("GAZEFORGE_WORKERS=4\n")
        assert get_settings().workers == 4


class TestRunConfig:
    """Test cases for run configuration parsing."""

    def test_defaults_file_matches_model(self):
        """Test the shipped defaults equal the model defaults."""
        assert load_run_config(DEFAULTS_FILE) == RunConfig()

    def test_default_constants(self):
        """Test the default grid, quota and calibration constants."""
        config = RunConfig()
        grid = config.grid_spec()
        assert (grid.n_pitch, grid.n_yaw, grid.n_bins) == (11, 13, 143)
        assert config.sampler.quota == 640
        assert config.sampler.empty_cell_policy is EmptyCellPolicy.ERROR
        assert config.calibration.center_k == 3
        assert config.calibration.repetitions == 9

    def test_unknown_key(self):
        """Test unknown keys are rejected with their location."""
        with pytest.raises(ConfigSchemaError) as exc:
            parse_run_config({"schema_version": 1, "grid": {"bin_size": 4}})
        assert any(p["loc"].startswith("grid") for p in exc.value.validation_errors)

    def test_wrong_schema_version(self):
        """Test only schema version 1 is accepted."""
        with pytest.raises(ConfigSchemaError):
            parse_run_config({"schema_version": 2})

    def test_bin_wider_than_interval(self):
        """Test a bin larger than the interval is a schema error."""
        with pytest.raises(ConfigSchemaError):
            parse_run_config({"grid": {"bin_size_pitch": 100.0}})

    def test_partial_document_fills_defaults(self):
        """Test omitted sections take their defaults."""
        config = parse_run_config({"sampler": {"quota": 8}})
        assert config.sampler.quota == 8
        assert config.grid_spec().n_bins == 143

    def test_clamp_toggle(self):
        """Test evaluation clamping can be switched off."""
        assert RunConfig().eval_interval is not None
        assert parse_run_config({"evaluation": {"clamp": False}}).eval_interval is None

    def test_dump_roundtrip(self):
        """Test a dumped configuration parses back to an equal model."""
        config = parse_run_config({"seed": 5, "sampler": {"empty_cell_policy": "skip"}})
        assert parse_run_config(json.loads(dump_run_config(config))) == config


class TestConfigResolution:
    """Test cases for locating the configuration file."""

    def test_shipped_defaults_last(self):
        """Test the shipped defaults are used without flag or environment."""
        assert resolve_config_path() == DEFAULTS_FILE

    def test_environment_fallback(self, env_config):
        """Test GAZEFORGE_CONFIG is used when no path is given."""
        env_config.write_text(json.dumps({"seed": 42}))
        assert resolve_config_path() == env_config
        assert load_run_config().seed == 42

    def test_explicit_path_wins(self, env_config, tmp_path):
        """Test an explicit path overrides the environment."""
        env_config.write_text(json.dumps({"seed": 42}))
        explicit = tmp_path / "explicit.json"
        explicit.write_text(json.dumps({"seed": 7}))
        assert load_run_config(explicit).seed == 7

    def test_missing_file(self, tmp_path):
        """Test a missing file raises MissingInputError."""
        with pytest.raises(MissingInputError):
            load_run_config(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path):
        """Test undecodable JSON is a schema error."""
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigSchemaError):
            load_run_config(path)
