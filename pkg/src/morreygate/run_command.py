from __future__ import annotations

import logging
import time
import uuid
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from morreygate.config import load_settings, load_suite_config, resolve_run_options
from morreygate.constants import NORMS_FILE, REPORT_FILE, ROWS_FILE, RUN_METADATA_FILE
from morreygate.env import capture_environment
from morreygate.errors import ConfigError, OutputCollisionError
from morreygate.fs import now_iso, write_csv, write_json
from morreygate.models import CaseRow, RunMetadata, SuiteConfig, SuiteReport, Verdict
from morreygate.norms import NORM_ROW_HEADER
from morreygate.suites import default_config, get_suite, run_suite

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_NAME = "default"


def _generate_run_id() -> str:
    ts = datetime.now(timezone.utc).strftime("%Y%m%d%H%M%S")
    short_uuid = uuid.uuid4().hex[:8]
    return f"run_{ts}_{short_uuid}"


def resolve_config(suite_id: str, config_arg: str, cwd: Path) -> tuple[SuiteConfig, str]:
    """The suite's built-in config for "default", otherwise the JSON file at config_arg."""
    get_suite(suite_id)
    if config_arg == DEFAULT_CONFIG_NAME:
        return default_config(suite_id), DEFAULT_CONFIG_NAME
    path = Path(config_arg)
    if not path.is_absolute():
        path = cwd / path
    config = load_suite_config(path)
    if config.suite != suite_id:
        raise ConfigError(f"{path} configures suite '{config.suite}', not '{suite_id}'")
    return config, str(path)


def execute_run(
    *,
    suite_id: str,
    config_arg: str = DEFAULT_CONFIG_NAME,
    out_dir: str | None = None,
    threads: int | None = None,
    refine: bool = False,
    force: bool = False,
    cwd: Path | None = None,
) -> dict:
    cwd = cwd or Path.cwd()
    run_id = _generate_run_id()
    started_at = now_iso()
    start_ms = _monotonic_ms()

    settings = load_settings(cwd)
    config, source = resolve_config(suite_id, config_arg, cwd)
    config = resolve_run_options(config, settings=settings, out_dir=out_dir, threads=threads)

    target = Path(config.out_dir or settings["out_dir"])
    if not target.is_absolute():
        target = cwd / target
    report_path = target / REPORT_FILE
    if report_path.exists() and not force:
        raise OutputCollisionError(f"{report_path} already exists; pass --force to overwrite")

    report, outcome = run_suite(config, refine=refine)

    rows_path = target / ROWS_FILE
    norms_path = target / NORMS_FILE
    metadata_path = target / RUN_METADATA_FILE
    write_json(report_path, report.model_dump(mode="json"))
    header, rows = flatten_rows(report.rows)
    write_csv(rows_path, header, rows, comment=f"config_hash: {report.config_hash}")
    write_csv(norms_path, NORM_ROW_HEADER, outcome.norm_rows, comment=f"config_hash: {report.config_hash}")

    metadata = RunMetadata(
        run_id=run_id,
        suite=suite_id,
        started_at=started_at,
        completed_at=now_iso(),
        duration_ms=_monotonic_ms() - start_ms,
        config_source=source,
        threads=config.threads,
        refine=refine,
        environment=capture_environment(),
    )
    write_json(metadata_path, metadata.model_dump(mode="json"))

    return {
        "status": report.status.value,
        "suite": suite_id,
        "report_path": str(report_path),
        "rows_path": str(rows_path),
        "norms_path": str(norms_path),
        "metadata_path": str(metadata_path),
        "run_id": run_id,
        "failed_criteria": failed_criteria(report),
    }


def failed_criteria(report: SuiteReport) -> list[str]:
    names = [c.name for c in report.criteria if c.verdict == Verdict.FAIL]
    if report.stability is not None:
        names += [c.name for c in report.stability.criteria if c.verdict == Verdict.FAIL]
    return names


def flatten_rows(rows: list[CaseRow]) -> tuple[list[str], list[list[Any]]]:
    """One CSV line per row; params and extras become prefixed columns in first-seen order."""
    param_keys: list[str] = []
    extra_keys: list[str] = []
    for row in rows:
        param_keys += [k for k in row.params if k not in param_keys]
        extra_keys += [k for k in row.extra if k not in extra_keys]
    header = (
        ["function_id", "function_class"]
        + [f"param:{k}" for k in param_keys]
        + ["left", "right", "ratio"]
        + [f"extra:{k}" for k in extra_keys]
    )
    lines = []
    for row in rows:
        lines.append(
            [row.function_id, row.function_class]
            + [_cell(row.params.get(k)) for k in param_keys]
            + [_cell(row.left), _cell(row.right), _cell(row.ratio)]
            + [_cell(row.extra.get(k)) for k in extra_keys]
        )
    return header, lines


def _cell(value: Any) -> Any:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


def _monotonic_ms() -> int:
    return int(time.monotonic() * 1000)
