from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from morreygate import __version__
from morreygate.constants import EXIT_ERROR, EXIT_PASS, EXIT_VERDICT_FAILURE
from morreygate.corpus_command import execute_corpus
from morreygate.env import check_environment
from morreygate.errors import MorreyGateError
from morreygate.report_command import execute_report
from morreygate.run_command import DEFAULT_CONFIG_NAME, execute_run, resolve_config
from morreygate.suites import list_suites


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="morreygate",
        description="Spectral verification harness for inequalities on Morrey spaces",
    )
    parser.add_argument("--version", action="version", version=f"morreygate {__version__}")
    parser.add_argument("--verbose", action="store_true", help="Log progress to stderr")

    sub = parser.add_subparsers(dest="command")

    # run
    run_p = sub.add_parser("run", help="Run one verification suite")
    run_p.add_argument("suite", help="Suite id (see list-suites)")
    run_p.add_argument("--config", default=DEFAULT_CONFIG_NAME, help="Path to a JSON config, or 'default'")
    run_p.add_argument("--out", default=None, help="Output directory")
    run_p.add_argument("--threads", type=int, default=None, help="Sweep threads")
    run_p.add_argument("--refine", action="store_true", help="Rerun at h/2 and 2L and append a stability block")
    run_p.add_argument("--force", action="store_true", help="Overwrite an existing report")

    # list-suites
    sub.add_parser("list-suites", help="List suite ids")

    # corpus
    corpus_p = sub.add_parser("corpus", help="Write the corpus manifest of a suite config")
    corpus_p.add_argument("suite", help="Suite id")
    corpus_p.add_argument("--manifest", required=True, help="Path of the manifest JSON")
    corpus_p.add_argument("--config", default=DEFAULT_CONFIG_NAME, help="Path to a JSON config, or 'default'")

    # report
    report_p = sub.add_parser("report", help="Merge suite reports")
    report_p.add_argument("--merge", required=True, help="Directory searched for report.json files")

    return parser


def _configure_logging(verbose: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("[morreygate %(levelname)s] %(message)s"))
    root = logging.getLogger("morreygate")
    root.handlers[:] = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)


def _refined_points(args: argparse.Namespace, cwd: Path) -> int:
    if args.command != "run" or not args.refine:
        return 0
    config, _ = resolve_config(args.suite, args.config, cwd)
    return (4 * config.grid.points_per_axis) ** config.grid.n_dims


def main(argv: list[str] | None = None) -> None:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        sys.exit(EXIT_PASS)

    _configure_logging(args.verbose)

    cwd = Path.cwd()

    try:
        # Print environment warnings
        warnings = check_environment(
            command=args.command,
            threads=getattr(args, "threads", None),
            refine=getattr(args, "refine", False),
            grid_points=_refined_points(args, cwd),
        )
        for w in warnings:
            print(f"[morreygate warn] {w}", file=sys.stderr)

        if args.command == "run":
            result = execute_run(
                suite_id=args.suite,
                config_arg=args.config,
                out_dir=args.out,
                threads=args.threads,
                refine=args.refine,
                force=args.force,
                cwd=cwd,
            )
            print(json.dumps(result, indent=2))
            sys.exit(EXIT_PASS if result["status"] == "pass" else EXIT_VERDICT_FAILURE)

        elif args.command == "list-suites":
            for suite_id, description in list_suites():
                print(f"{suite_id:<22}{description}")
            sys.exit(EXIT_PASS)

        elif args.command == "corpus":
            result = execute_corpus(suite_id=args.suite, manifest=args.manifest, config_arg=args.config, cwd=cwd)
            print(json.dumps(result, indent=2))
            sys.exit(EXIT_PASS)

        elif args.command == "report":
            result = execute_report(merge_dir=args.merge, cwd=cwd)
            print(json.dumps(result, indent=2))
            sys.exit(EXIT_PASS if result["status"] == "pass" else EXIT_VERDICT_FAILURE)

    except (MorreyGateError, ImportError) as exc:
        print(f"[morreygate error] {exc}", file=sys.stderr)
        sys.exit(EXIT_ERROR)
