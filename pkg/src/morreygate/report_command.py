from __future__ import annotations

from pathlib import Path

from pydantic import ValidationError

from morreygate.constants import REPORT_FILE, SUMMARY_JSON_FILE, SUMMARY_MD_FILE
from morreygate.errors import ReportError
from morreygate.fs import find_reports, read_json, write_json, write_text
from morreygate.models import MergedSummary, ReportDigest, SuiteReport, Verdict
from morreygate.run_command import failed_criteria


def execute_report(*, merge_dir: str, cwd: Path | None = None) -> dict:
    cwd = cwd or Path.cwd()
    root = Path(merge_dir)
    if not root.is_absolute():
        root = cwd / root
    if not root.is_dir():
        raise ReportError(f"{root} is not a directory")

    paths = find_reports(root, REPORT_FILE)
    if not paths:
        raise ReportError(f"no {REPORT_FILE} found under {root}")

    digests = [_digest(path, root) for path in paths]
    status = Verdict.FAIL if any(d.status == Verdict.FAIL for d in digests) else Verdict.PASS
    summary = MergedSummary(status=status, reports=digests)

    json_path = root / SUMMARY_JSON_FILE
    md_path = root / SUMMARY_MD_FILE
    write_json(json_path, summary.model_dump(mode="json"))
    write_text(md_path, render_markdown(summary))

    return {
        "status": status.value,
        "report_count": len(digests),
        "summary_json": str(json_path),
        "summary_md": str(md_path),
    }


def _digest(path: Path, root: Path) -> ReportDigest:
    try:
        report = SuiteReport(**read_json(path))
    except (ValueError, ValidationError) as exc:
        raise ReportError(f"{path} is not a suite report: {exc}") from exc
    return ReportDigest(
        suite=report.suite,
        status=report.status,
        config_hash=report.config_hash,
        path=str(path.relative_to(root)),
        failed_criteria=failed_criteria(report),
    )


def render_markdown(summary: MergedSummary) -> str:
    lines = [
        "# morreygate summary",
        "",
        f"Overall: **{summary.status.value.upper()}** ({len(summary.reports)} report(s))",
        "",
        "| suite | status | config hash | report | failed criteria |",
        "|---|---|---|---|---|",
    ]
    for d in summary.reports:
        failed = ", ".join(d.failed_criteria) or "-"
        lines.append(f"| {d.suite} | {d.status.value} | `{d.config_hash[:12]}` | {d.path} | {failed} |")
    return "\n".join(lines) + "\n"
