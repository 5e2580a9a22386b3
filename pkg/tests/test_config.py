"""Tests for configuration file support."""

import math
import sys
from fractions import Fraction
from pathlib import Path
from unittest.mock import patch

import pytest

from superefficiency_lab.config import (
    DEFAULT_CONFIG,
    ConfigError,
    ExperimentConfig,
    find_config_file,
    init_config_file,
    load_config,
    merge_config,
)
from superefficiency_lab.estimators import EstimatorKind
from superefficiency_lab.extraction import WidthError


class TestInitConfigFile:
    """Tests for init_config_file function."""

    def test_creates_config_file(self, tmp_path):
        """Test that config file is created with default content."""
        config_path = tmp_path / "test-config.toml"
        init_config_file(config_path)

        assert config_path.exists()
        content = config_path.read_text()
        assert "superefficiency-lab configuration" in content
        assert "epsilon = " in content

    def test_creates_parent_directories(self, tmp_path):
        """Test that parent directories are created if they don't exist."""
        config_path = tmp_path / "subdir" / "another" / "config.toml"
        init_config_file(config_path)

        assert config_path.exists()

    def test_overwrites_existing_file(self, tmp_path):
        config_path = tmp_path / "config.toml"
        config_path.write_text("old content")

        init_config_file(config_path)

        assert config_path.read_text() == DEFAULT_CONFIG

    def test_default_config_matches_dataclass(self, tmp_path):
        """Test that every documented key parses back to the built-in default."""
        config_path = tmp_path / "config.toml"
        init_config_file(config_path)

        values = load_config(config_path)

        assert set(values) == set(ExperimentConfig().to_dict())
        assert ExperimentConfig.from_mapping(values) == ExperimentConfig()


class TestLoadConfig:
    """Tests for load_config function."""

    def test_loads_valid_toml(self, tmp_path):
        config_path = tmp_path / "config.toml"
        config_path.write_text("""
estimator = "mle"
format = "json"
seed = 5
verbose = true
epsilon = 0.05
n_grid = [100, 1000]
""")

        config = load_config(config_path)

        assert config["estimator"] == "mle"
        assert config["seed"] == 5
        assert config["verbose"] is True
        assert config["epsilon"] == 0.05
        assert config["n_grid"] == [100, 1000]

    def test_infinite_bounds(self, tmp_path):
        config_path = tmp_path / "config.toml"
        config_path.write_text("theta_lower = -inf\ntheta_upper = inf\n")

        config = load_config(config_path)

        assert config["theta_lower"] == -math.inf
        assert config["theta_upper"] == math.inf

    def test_empty_file_returns_empty_dict(self, tmp_path):
        config_path = tmp_path / "config.toml"
        config_path.write_text("")

        assert load_config(config_path) == {}

    def test_nonexistent_file_returns_empty_dict(self, tmp_path):
        assert load_config(tmp_path / "nonexistent.toml") == {}

    def test_invalid_toml_raises_config_error(self, tmp_path):
        config_path = tmp_path / "config.toml"
        config_path.write_text("invalid toml { [ content")

        with pytest.raises(ConfigError):
            load_config(config_path)

    def test_tables_are_rejected(self, tmp_path):
        """Test that nested tables are rejected; the file is flat."""
        config_path = tmp_path / "config.toml"
        config_path.write_text("[extraction]\nepsilon = 0.1\n")

        with pytest.raises(ConfigError) as excinfo:
            load_config(config_path)
        assert excinfo.value.key == "extraction"

    @pytest.mark.skipif(sys.version_info >= (3, 11), reason="tomllib built-in for Python 3.11+")
    def test_missing_tomli_raises_error(self, tmp_path):
        config_path = tmp_path / "config.toml"
        config_path.write_text("seed = 1")

        with patch("superefficiency_lab.config.tomllib", None):
            with pytest.raises(ValueError, match="TOML support not available"):
                load_config(config_path)


class TestFindConfigFile:
    """Tests for find_config_file function."""

    def test_finds_local_config(self, tmp_path, monkeypatch):
        """Test that local .superefficiency-lab.toml is found first."""
        local_config = tmp_path / ".superefficiency-lab.toml"
        local_config.write_text("seed = 1")

        global_config_dir = tmp_path / ".config" / "superefficiency-lab"
        global_config_dir.mkdir(parents=True)
        (global_config_dir / "config.toml").write_text("seed = 2")

        monkeypatch.chdir(tmp_path)
        monkeypatch.setattr(Path, "home", lambda: tmp_path)

        assert find_config_file() == local_config

    def test_finds_global_config_when_no_local(self, tmp_path, monkeypatch):
        global_config_dir = tmp_path / ".config" / "superefficiency-lab"
        global_config_dir.mkdir(parents=True)
        global_config = global_config_dir / "config.toml"
        global_config.write_text("seed = 2")

        monkeypatch.chdir(tmp_path)
        monkeypatch.setattr(Path, "home", lambda: tmp_path)

        assert find_config_file() == global_config

    def test_returns_none_when_no_config_exists(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        monkeypatch.setattr(Path, "home", lambda: tmp_path)

        assert find_config_file() is None

    def test_explicit_path_wins(self, tmp_path, monkeypatch):
        explicit = tmp_path / "custom.toml"
        explicit.write_text("seed = 3")
        (tmp_path / ".superefficiency-lab.toml").write_text("seed = 1")
        monkeypatch.chdir(tmp_path)

        assert find_config_file(explicit) == explicit

    def test_missing_explicit_path(self, tmp_path):
        with pytest.raises(ConfigError):
            find_config_file(tmp_path / "missing.toml")


class TestMergeConfig:
    """Tests for merge_config function."""

    def test_cli_overrides_file(self):
        config = merge_config({"seed": 1, "epsilon": 0.05}, {"seed": 7})

        assert config.seed == 7
        assert config.epsilon == 0.05

    def test_none_values_do_not_override(self):
        config = merge_config({"estimator": "mle"}, {"estimator": None, "workers": None})

        assert config.estimator == "mle"
        assert config.workers == 1

    def test_defaults_when_empty(self):
        assert merge_config({}, {}) == ExperimentConfig()

    def test_unknown_key(self):
        with pytest.raises(ConfigError) as excinfo:
            merge_config({"lang": "en"}, {})
        assert excinfo.value.key == "lang"

    def test_coerces_types(self):
        """Test that TOML integers become floats and whole floats become integers."""
        config = merge_config({"sigma": 2, "n_list": [10.0, 100]}, {})

        assert isinstance(config.sigma, float)
        assert config.n_list == [10, 100]
        assert all(isinstance(n, int) for n in config.n_list)

    @pytest.mark.parametrize("values", [
        {"n_list": [1.5]},
        {"verbose": "yes"},
        {"c_grid": 1.0},
        {"sigma": True},
    ])
    def test_rejects_wrong_types(self, values):
        with pytest.raises(ConfigError):
            merge_config(values, {})


class TestExperimentConfig:
    """Tests for building domain objects and validating a run."""

    def test_builds_estimators(self):
        assert ExperimentConfig(estimator="mle").estimator_spec().kind is EstimatorKind.MLE
        assert ExperimentConfig(estimator="constant", value=0.3).estimator_spec().value == 0.3
        assert ExperimentConfig(estimator="multi-hodges", pivots=[0.0, 0.04]).estimator_spec().pivots == (0.0, 0.04)
        assert ExperimentConfig().estimator_spec().pivot == 0.0

    def test_builds_extraction_config(self):
        extraction = ExperimentConfig().extraction_config()

        assert extraction.initial_interval == (Fraction(-1, 20), Fraction(1, 20))
        assert extraction.grid_points == 64

    @pytest.mark.parametrize("command", ["affinity", "tv", "concentration", "efficiency", "extract", "check-assumptions", "demo"])
    def test_defaults_are_valid(self, command):
        ExperimentConfig().validate(command)

    @pytest.mark.parametrize("command, values, key", [
        ("affinity", {"sigma": -1.0}, "sigma"),
        ("affinity", {"discrete_k": 21}, "discrete_k"),
        ("affinity", {"n_list": [0]}, "n_list"),
        ("concentration", {"samples": 99}, "samples"),
        ("concentration", {"c_list": [0.0]}, "c_list"),
        ("concentration", {"theta_list": [5.0], "theta_upper": 1.0}, "theta_list"),
        ("efficiency", {"c_grid": [2.0, 1.0]}, "c_grid"),
        ("efficiency", {"n_grid": [100, 100]}, "n_grid"),
        ("efficiency", {"estimator": "hodges", "pivot": 3.0, "theta_upper": 1.0}, "estimator"),
        ("extract", {"a": 1.5}, "extraction"),
        ("extract", {"epsilon": 0.5}, "extraction"),
        ("extract", {"estimator": "mle", "interval_left": 0.0, "interval_right": 0.1, "theta_lower": 0.01}, "interval_left"),
        ("check-assumptions", {"lam_list": [-1.0]}, "lam_list"),
        ("demo", {"workers": 0}, "workers"),
    ])
    def test_invalid_values(self, command, values, key):
        with pytest.raises(ConfigError) as excinfo:
            ExperimentConfig(**values).validate(command)
        assert excinfo.value.key == key

    def test_unknown_format(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(format="xml").validate("affinity")

    def test_long_interval_is_width_error(self):
        with pytest.raises(WidthError):
            ExperimentConfig(interval_left=-5.0, interval_right=5.0).validate("extract")

    def test_n_max_below_chosen_sample_size(self):
        """Test that the single-locus check is refused before it runs."""
        config = ExperimentConfig(interval_left=-0.01, interval_right=0.01)

        config.validate("extract")
        with pytest.raises(ConfigError) as excinfo:
            config.validate("extract", countability=True)
        assert excinfo.value.key == "n_max"
        assert "14641" in excinfo.value.message
        with pytest.raises(ConfigError, match="n_max"):
            config.validate("demo")

    def test_n_max_at_chosen_sample_size(self):
        ExperimentConfig(n_max=586).validate("demo")

    def test_error_object(self):
        error = ConfigError("epsilon", "must be positive")

        assert error.to_dict() == {"error": "invalid_config", "key": "epsilon", "message": "must be positive"}
