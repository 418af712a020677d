from __future__ import annotations

import json
from pathlib import Path

import pytest

from morreygate.errors import ConfigError, OutputCollisionError, UnknownSuiteError
from morreygate.models import CaseRow, CorpusConfig, FunctionKind, SuiteConfig, SweepAxes
from morreygate.run_command import execute_run, flatten_rows, resolve_config


@pytest.fixture(autouse=True)
def _clear_env(monkeypatch):
    monkeypatch.delenv("MORREYGATE_OUT_DIR", raising=False)
    monkeypatch.delenv("MORREYGATE_THREADS", raising=False)


class TestExecuteRun:
    def test_writes_all_artifacts(self, tmp_project: Path, write_config, small_roundtrip_config: SuiteConfig):
        write_config(small_roundtrip_config)
        result = execute_run(suite_id="roundtrip", config_arg="config.json", cwd=tmp_project)

        assert result["suite"] == "roundtrip"
        assert result["status"] in ("pass", "fail")
        assert (result["status"] == "fail") == bool(result["failed_criteria"])
        for key in ("report_path", "rows_path", "norms_path", "metadata_path"):
            assert Path(result[key]).exists()
        assert Path(result["report_path"]).parent == tmp_project / "out"

        report = json.loads(Path(result["report_path"]).read_text())
        assert report["suite"] == "roundtrip"
        assert "out_dir" not in report["config"]
        assert result["run_id"].startswith("run_")

    def test_csv_files_carry_config_hash(self, tmp_project: Path, write_config, small_roundtrip_config):
        write_config(small_roundtrip_config)
        result = execute_run(suite_id="roundtrip", config_arg="config.json", cwd=tmp_project)

        report = json.loads(Path(result["report_path"]).read_text())
        for key in ("rows_path", "norms_path"):
            first = Path(result[key]).read_text().splitlines()[0]
            assert first == f"# config_hash: {report['config_hash']}"
        header = Path(result["rows_path"]).read_text().splitlines()[1]
        assert header.startswith("function_id,function_class,param:tuple")

    def test_rows_csv_lists_check_rows_after_cases(self, tmp_project: Path, write_config, small_roundtrip_config):
        write_config(small_roundtrip_config)
        result = execute_run(suite_id="roundtrip", config_arg="config.json", cwd=tmp_project)

        lines = Path(result["rows_path"]).read_text().splitlines()[1:]
        header = lines[0].split(",")
        checks = [line.split(",")[header.index("param:check")] for line in lines[1:]]
        assert checks == ["", "homogeneity", "homogeneity"]
        scalars = [line.split(",")[header.index("param:scalar")] for line in lines[2:]]
        assert scalars == ["1.0", "2.5"]

    def test_metadata_records_source_and_refine(self, tmp_project: Path, write_config, small_roundtrip_config):
        path = write_config(small_roundtrip_config)
        result = execute_run(suite_id="roundtrip", config_arg="config.json", cwd=tmp_project)

        metadata = json.loads(Path(result["metadata_path"]).read_text())
        assert metadata["config_source"] == str(path)
        assert metadata["refine"] is False
        assert metadata["threads"] == 1
        assert "numpy" in metadata["environment"]["packages"]

    def test_existing_report_needs_force(self, tmp_project: Path, write_config, small_roundtrip_config):
        write_config(small_roundtrip_config)
        execute_run(suite_id="roundtrip", config_arg="config.json", cwd=tmp_project)

        with pytest.raises(OutputCollisionError):
            execute_run(suite_id="roundtrip", config_arg="config.json", cwd=tmp_project)

        result = execute_run(suite_id="roundtrip", config_arg="config.json", force=True, cwd=tmp_project)
        assert Path(result["report_path"]).exists()

    def test_out_dir_argument_wins(self, tmp_project: Path, write_config, small_roundtrip_config):
        write_config(small_roundtrip_config)
        result = execute_run(suite_id="roundtrip", config_arg="config.json", out_dir="elsewhere", cwd=tmp_project)
        assert Path(result["report_path"]).parent == tmp_project / "elsewhere"

    def test_default_settings_without_project_file(self, tmp_path: Path, write_config, small_roundtrip_config):
        write_config(small_roundtrip_config)
        result = execute_run(suite_id="roundtrip", config_arg="config.json", cwd=tmp_path)
        assert Path(result["report_path"]).parent == tmp_path / ".morreygate"


class TestDeterminism:
    def test_repeat_run_writes_identical_report(self, tmp_project: Path, write_config, small_roundtrip_config):
        write_config(small_roundtrip_config)
        first = execute_run(suite_id="roundtrip", config_arg="config.json", out_dir="first", cwd=tmp_project)
        second = execute_run(suite_id="roundtrip", config_arg="config.json", out_dir="second", cwd=tmp_project)
        assert Path(first["report_path"]).read_bytes() == Path(second["report_path"]).read_bytes()

    def test_thread_count_leaves_results_unchanged(self, tmp_project: Path, write_config, small_roundtrip_config):
        config = small_roundtrip_config.model_copy(
            update={
                "corpus": CorpusConfig(kinds=[FunctionKind.BUMP], size=3, bump_radii=[1.0, 1.5, 2.0]),
                "sweep": SweepAxes(alphas=[0.25, 0.5]),
            }
        )
        write_config(config)
        reports = []
        for threads in (1, 3):
            result = execute_run(
                suite_id="roundtrip", config_arg="config.json", out_dir=f"t{threads}", threads=threads, cwd=tmp_project
            )
            reports.append(json.loads(Path(result["report_path"]).read_text()))
        single, pooled = reports
        assert pooled["provenance"]["threads"] == 3
        for key in ("rows", "criteria", "summary", "status", "exponent_tuples"):
            assert single[key] == pooled[key]
        assert len(single["rows"]) > 3


class TestResolveConfig:
    def test_default_config(self, tmp_path: Path):
        config, source = resolve_config("olsen", "default", tmp_path)
        assert config.suite == "olsen"
        assert source == "default"

    def test_suite_mismatch(self, tmp_path: Path, write_config, small_roundtrip_config):
        write_config(small_roundtrip_config)
        with pytest.raises(ConfigError, match="not 'hardy'"):
            resolve_config("hardy", "config.json", tmp_path)

    def test_unknown_suite(self, tmp_path: Path):
        with pytest.raises(UnknownSuiteError):
            resolve_config("nope", "default", tmp_path)


class TestFlattenRows:
    def test_columns_in_first_seen_order(self):
        rows = [
            CaseRow(function_id="a", function_class="compact", params={"u": 1.0}, left=2.0, right=4.0, ratio=0.5),
            CaseRow(
                function_id="b",
                function_class="gaussian",
                params={"u": 2.0, "w": "inf"},
                extra={"gap": 0.25},
            ),
        ]
        header, lines = flatten_rows(rows)
        assert header == [
            "function_id",
            "function_class",
            "param:u",
            "param:w",
            "left",
            "right",
            "ratio",
            "extra:gap",
        ]
        assert lines[0] == ["a", "compact", "1.0", "", "2.0", "4.0", "0.5", ""]
        assert lines[1] == ["b", "gaussian", "2.0", "inf", "", "", "", "0.25"]
