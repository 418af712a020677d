from __future__ import annotations

import json
from pathlib import Path

import pytest

from morreygate.grid import GridFunction, GridSpec, build_grid, sample
from morreygate.models import CorpusConfig, FunctionKind, GridConfig, SuiteConfig, SweepAxes
from morreygate.testfns import gaussian


@pytest.fixture
def line_spec() -> GridSpec:
    return build_grid(1, 32.0, 512)


@pytest.fixture
def plane_spec() -> GridSpec:
    return build_grid(2, 16.0, 64)


@pytest.fixture
def sampled_gaussian(line_spec: GridSpec) -> GridFunction:
    return sample(gaussian(sigma=1.0), line_spec)


@pytest.fixture
def small_roundtrip_config() -> SuiteConfig:
    """A roundtrip config small enough to run in well under a second."""
    return SuiteConfig(
        suite="roundtrip",
        grid=GridConfig(n_dims=1, extent=16.0, points_per_axis=128),
        corpus=CorpusConfig(kinds=[FunctionKind.BUMP], size=1, bump_radii=[1.0]),
        sweep=SweepAxes(alphas=[0.5]),
        exponents=[{"p": 1.5, "q": 3.0}],
    )


@pytest.fixture
def tmp_project(tmp_path: Path) -> Path:
    """A project directory with a morreygate.toml pointing output at ./out."""
    (tmp_path / "morreygate.toml").write_text('out_dir = "out"\nthreads = 1\n')
    return tmp_path


@pytest.fixture
def write_config(tmp_path: Path):
    """Write a SuiteConfig as JSON under tmp_path and return the path."""

    def _write(config: SuiteConfig, name: str = "config.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(config.model_dump(mode="json"), indent=2))
        return path

    return _write


@pytest.fixture
def seed_report(tmp_path: Path):
    """Write a minimal suite report to tmp_path/<subdir>/report.json and return its path."""

    def _seed(subdir: str, suite: str = "roundtrip", status: str = "pass") -> Path:
        failed = status == "fail"
        report = {
            "version": "1.0.0",
            "suite": suite,
            "config_hash": "ab" * 32,
            "config": {"suite": suite},
            "grid": {"n_dims": 1, "extent": 16.0, "points_per_axis": 128, "spacing": 0.125},
            "criteria": [
                {
                    "name": "homogeneity",
                    "description": "ratio unchanged under scaling",
                    "observed": 0.5 if failed else 0.0,
                    "bound": 1e-10,
                    "comparison": "<=",
                    "verdict": status,
                }
            ],
            "provenance": {"config_hash": "ab" * 32, "threads": 1},
            "status": status,
        }
        path = tmp_path / subdir / "report.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(report, indent=2))
        return path

    return _seed
