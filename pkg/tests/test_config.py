from __future__ import annotations

import json
from pathlib import Path

import pytest

from morreygate.config import (
    config_hash,
    load_settings,
    load_suite_config,
    parse_suite_config,
    resolve_run_options,
)
from morreygate.constants import DEFAULT_OUT_DIR, ENV_OUT_DIR, ENV_THREADS
from morreygate.errors import ConfigError
from morreygate.models import GridConfig, SuiteConfig


class TestLoadSettings:
    def test_defaults_when_no_config(self, tmp_path: Path):
        settings = load_settings(tmp_path)
        assert settings["source"] == "defaults"
        assert settings["out_dir"] == DEFAULT_OUT_DIR
        assert settings["threads"] == 1

    def test_morreygate_toml_takes_priority(self, tmp_path: Path):
        (tmp_path / "morreygate.toml").write_text('out_dir = "results"\nthreads = 3\n')
        (tmp_path / "pyproject.toml").write_text('[tool.morreygate]\nout_dir = "elsewhere"\n')
        settings = load_settings(tmp_path)
        assert settings["out_dir"] == "results"
        assert settings["threads"] == 3
        assert "morreygate.toml" in settings["source"]

    def test_pyproject_toml_fallback(self, tmp_path: Path):
        (tmp_path / "pyproject.toml").write_text("[tool.morreygate]\nthreads = 2\n")
        settings = load_settings(tmp_path)
        assert settings["threads"] == 2
        assert settings["out_dir"] == DEFAULT_OUT_DIR
        assert "pyproject.toml" in settings["source"]

    def test_pyproject_without_section_returns_defaults(self, tmp_path: Path):
        (tmp_path / "pyproject.toml").write_text("[tool.ruff]\nline-length = 80\n")
        assert load_settings(tmp_path)["source"] == "defaults"

    def test_unknown_key_raises(self, tmp_path: Path):
        (tmp_path / "morreygate.toml").write_text("max_attempts = 5\n")
        with pytest.raises(ConfigError, match="max_attempts"):
            load_settings(tmp_path)

    def test_bad_thread_count_raises(self, tmp_path: Path):
        (tmp_path / "morreygate.toml").write_text("threads = 0\n")
        with pytest.raises(ConfigError):
            load_settings(tmp_path)


class TestSuiteConfigFiles:
    def test_load_valid_config(self, tmp_path: Path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"suite": "hardy", "grid": {"n_dims": 1, "extent": 64.0, "points_per_axis": 1024}}))
        config = load_suite_config(path)
        assert config.suite == "hardy"
        assert config.grid.extent == 64.0
        assert config.tolerances.discretization == 0.05

    def test_unknown_key_is_named(self):
        with pytest.raises(ConfigError, match="unknown key 'grid.spacing'"):
            parse_suite_config({"suite": "hardy", "grid": {"spacing": 0.1}})

    def test_wrong_type_is_reported(self):
        with pytest.raises(ConfigError, match="threads"):
            parse_suite_config({"suite": "hardy", "threads": "many"})

    def test_non_object_rejected(self):
        with pytest.raises(ConfigError, match="JSON object"):
            parse_suite_config([1, 2, 3])

    def test_invalid_json(self, tmp_path: Path):
        path = tmp_path / "c.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError, match="not valid JSON"):
            load_suite_config(path)

    def test_missing_file(self, tmp_path: Path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_suite_config(tmp_path / "absent.json")


class TestResolveRunOptions:
    SETTINGS = {"out_dir": "from-settings", "threads": 2, "source": "test"}

    def test_settings_fill_unset_values(self, monkeypatch: pytest.MonkeyPatch):
        monkeypatch.delenv(ENV_OUT_DIR, raising=False)
        monkeypatch.delenv(ENV_THREADS, raising=False)
        config = resolve_run_options(SuiteConfig(suite="olsen"), settings=self.SETTINGS)
        assert config.out_dir == "from-settings"
        assert config.threads == 2

    def test_config_beats_settings(self, monkeypatch: pytest.MonkeyPatch):
        monkeypatch.delenv(ENV_OUT_DIR, raising=False)
        monkeypatch.delenv(ENV_THREADS, raising=False)
        config = resolve_run_options(SuiteConfig(suite="olsen", threads=4, out_dir="cfg"), settings=self.SETTINGS)
        assert config.out_dir == "cfg"
        assert config.threads == 4

    def test_environment_beats_config(self, monkeypatch: pytest.MonkeyPatch):
        monkeypatch.setenv(ENV_OUT_DIR, "from-env")
        monkeypatch.setenv(ENV_THREADS, "5")
        config = resolve_run_options(SuiteConfig(suite="olsen", threads=4, out_dir="cfg"), settings=self.SETTINGS)
        assert config.out_dir == "from-env"
        assert config.threads == 5

    def test_flags_beat_everything(self, monkeypatch: pytest.MonkeyPatch):
        monkeypatch.setenv(ENV_OUT_DIR, "from-env")
        monkeypatch.setenv(ENV_THREADS, "5")
        config = resolve_run_options(
            SuiteConfig(suite="olsen"), settings=self.SETTINGS, out_dir="flag", threads=6
        )
        assert config.out_dir == "flag"
        assert config.threads == 6

    def test_bad_environment_thread_count(self, monkeypatch: pytest.MonkeyPatch):
        monkeypatch.setenv(ENV_THREADS, "lots")
        with pytest.raises(ConfigError, match=ENV_THREADS):
            resolve_run_options(SuiteConfig(suite="olsen"), settings=self.SETTINGS)


class TestConfigHash:
    def test_out_dir_does_not_change_the_hash(self):
        assert config_hash(SuiteConfig(suite="olsen", out_dir="a")) == config_hash(SuiteConfig(suite="olsen"))

    def test_grid_changes_the_hash(self):
        base = SuiteConfig(suite="olsen")
        other = SuiteConfig(suite="olsen", grid=GridConfig(points_per_axis=1024))
        assert config_hash(base) != config_hash(other)
        assert len(config_hash(base)) == 64
