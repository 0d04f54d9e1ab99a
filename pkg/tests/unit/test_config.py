"""Unit tests for configuration and logging setup."""

import json

import pytest

from setlat.application.commands import RunSettings
from setlat.config import (CONFIG_ENV_VARS, DEFAULT_CONFIG, get_application_config,
                           get_dini_config, get_logging_config, get_tolerances,
                           load_config)
from setlat.domain.exceptions import ConfigurationError
from setlat.infrastructure.logging import configure_logging, get_logger


@pytest.fixture
def clean_env(monkeypatch):
    for name in CONFIG_ENV_VARS:
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


@pytest.fixture
def restore_logging():
    yield
    configure_logging()


class TestLoadConfig:
    """Test defaults, environment variables and overrides."""

    def test_defaults(self, clean_env):
        assert load_config() == DEFAULT_CONFIG

    def test_environment_overrides(self, clean_env):
        clean_env.setenv("SETLAT_DINI_K", "30")
        clean_env.setenv("SETLAT_TAU_H", "1e-5")
        clean_env.setenv("SETLAT_DINI_EXTRAPOLATE", "false")

        config = load_config()

        assert config["dini_k"] == 30
        assert config["tau_h"] == 1e-5
        assert config["dini_extrapolate"] is False

    def test_explicit_overrides_win(self, clean_env):
        clean_env.setenv("SETLAT_LOG_LEVEL", "INFO")

        config = load_config({"log_level": "DEBUG", "log_format": None})

        assert config["log_level"] == "DEBUG"
        assert config["log_format"] == "text"

    def test_unparsable_environment_value(self, clean_env):
        clean_env.setenv("SETLAT_SEGMENT_POINTS", "many")

        with pytest.raises(ConfigurationError) as info:
            load_config()

        assert info.value.details["variable"] == "SETLAT_SEGMENT_POINTS"

    def test_unknown_key(self, clean_env):
        with pytest.raises(ConfigurationError):
            load_config({"temperature": 0.7})

    @pytest.mark.parametrize("overrides", [
        {"tau_h": 0.0},
        {"dini_rho": 1.0},
        {"dini_k": 6, "dini_window": 6},
        {"dini_residual_depth": 1},
        {"segment_points": 17},
        {"hull_edge_samples": 1},
        {"dual_refinement": -1},
        {"log_format": "xml"},
    ])
    def test_out_of_range(self, clean_env, overrides):
        with pytest.raises(ConfigurationError):
            load_config(overrides)


class TestTypedViews:
    """Test the typed settings built from a configuration."""

    def test_views(self, clean_env):
        config = load_config({"dini_k": 16, "tau_strict": 1e-8})

        assert get_dini_config(config).K == 16
        assert get_tolerances(config).tau_strict == 1e-8
        assert get_logging_config(config) == {"level": "WARNING", "format_type": "text",
                                              "log_file": None}

    def test_run_settings(self, clean_env):
        settings = RunSettings.from_config(get_application_config({"segment_points": 65}))

        assert settings.segment_points == 65
        assert settings.dini.K == 24
        assert settings.edge_samples == 9
        assert settings.dual_refinement == 1


class TestLogging:
    """Test structured logging setup."""

    def test_invalid_level(self):
        with pytest.raises(ConfigurationError):
            configure_logging(level="LOUD")

    def test_invalid_format(self):
        with pytest.raises(ConfigurationError):
            configure_logging(format_type="xml")

    def test_json_lines_on_stderr(self, capsys, restore_logging):
        configure_logging(level="DEBUG", format_type="json")

        get_logger("setlat.test").info("sample", value=0.12345678901234567)
        captured = capsys.readouterr()

        assert captured.out == ""
        record = json.loads(captured.err.strip().splitlines()[-1])
        assert record["event"] == "sample"
        assert record["level"] == "info"
        assert record["value"] == 0.123456789012

    def test_level_filters(self, capsys, restore_logging):
        configure_logging(level="WARNING")

        get_logger("setlat.test").info("quiet")

        assert "quiet" not in capsys.readouterr().err

    def test_log_file_directory_created(self, tmp_path, restore_logging):
        path = tmp_path / "logs" / "run.log"

        configure_logging(log_file=str(path))

        assert path.parent.is_dir()
