from __future__ import annotations

from unittest.mock import patch

import pytest

from morreygate.cli import main
from morreygate.errors import ConfigError


class TestCLIParsing:
    def test_no_command_shows_help(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 0

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        captured = capsys.readouterr()
        assert "morreygate" in captured.out

    def test_run_requires_suite(self):
        with pytest.raises(SystemExit) as exc:
            main(["run"])
        assert exc.value.code != 0

    def test_report_requires_merge(self):
        with pytest.raises(SystemExit) as exc:
            main(["report"])
        assert exc.value.code != 0

    def test_corpus_requires_manifest(self):
        with pytest.raises(SystemExit) as exc:
            main(["corpus", "olsen"])
        assert exc.value.code != 0


@patch("morreygate.cli.check_environment", return_value=[])
class TestCLIRun:
    @patch("morreygate.cli.execute_run")
    def test_run_pass_exits_0(self, mock_run, mock_env, capsys):
        mock_run.return_value = {"status": "pass", "suite": "olsen", "failed_criteria": []}

        with pytest.raises(SystemExit) as exc:
            main(["run", "olsen"])
        assert exc.value.code == 0
        assert '"status": "pass"' in capsys.readouterr().out

    @patch("morreygate.cli.execute_run")
    def test_run_fail_exits_2(self, mock_run, mock_env):
        mock_run.return_value = {"status": "fail", "suite": "olsen", "failed_criteria": ["sup-finite"]}

        with pytest.raises(SystemExit) as exc:
            main(["run", "olsen"])
        assert exc.value.code == 2

    @patch("morreygate.cli.execute_run")
    def test_arguments_are_forwarded(self, mock_run, mock_env):
        mock_run.return_value = {"status": "pass"}

        with pytest.raises(SystemExit):
            main(["run", "hardy", "--config", "c.json", "--out", "o", "--threads", "3", "--force"])
        kwargs = mock_run.call_args.kwargs
        assert kwargs["suite_id"] == "hardy"
        assert kwargs["config_arg"] == "c.json"
        assert kwargs["out_dir"] == "o"
        assert kwargs["threads"] == 3
        assert kwargs["force"] is True
        assert kwargs["refine"] is False

    @patch("morreygate.cli.execute_run", side_effect=ConfigError("bad config"))
    def test_toolkit_error_exits_1(self, mock_run, mock_env, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["run", "olsen"])
        assert exc.value.code == 1
        assert "[morreygate error] bad config" in capsys.readouterr().err

    @patch("morreygate.cli.execute_run", side_effect=ImportError("tomli missing"))
    def test_import_error_exits_1(self, mock_run, mock_env):
        with pytest.raises(SystemExit) as exc:
            main(["run", "olsen"])
        assert exc.value.code == 1

    @patch("morreygate.cli.execute_run")
    def test_environment_warnings_go_to_stderr(self, mock_run, mock_env, capsys):
        mock_env.return_value = ["something odd"]
        mock_run.return_value = {"status": "pass"}

        with pytest.raises(SystemExit):
            main(["run", "olsen"])
        assert "[morreygate warn] something odd" in capsys.readouterr().err

    @patch("morreygate.cli.resolve_config", side_effect=ConfigError("missing"))
    def test_refine_resolves_config_for_memory_check(self, mock_resolve, mock_env):
        with pytest.raises(SystemExit) as exc:
            main(["run", "olsen", "--refine", "--config", "missing.json"])
        assert exc.value.code == 1
        mock_resolve.assert_called_once()


class TestCLIListSuites:
    def test_lists_every_suite(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["list-suites"])
        assert exc.value.code == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 10
        assert lines[0].startswith("iu-bound")


@patch("morreygate.cli.check_environment", return_value=[])
class TestCLIReport:
    @patch("morreygate.cli.execute_report")
    def test_report_pass_exits_0(self, mock_report, mock_env):
        mock_report.return_value = {"status": "pass", "report_count": 1}

        with pytest.raises(SystemExit) as exc:
            main(["report", "--merge", "runs"])
        assert exc.value.code == 0
        assert mock_report.call_args.kwargs["merge_dir"] == "runs"

    @patch("morreygate.cli.execute_report")
    def test_report_fail_exits_2(self, mock_report, mock_env):
        mock_report.return_value = {"status": "fail", "report_count": 2}

        with pytest.raises(SystemExit) as exc:
            main(["report", "--merge", "runs"])
        assert exc.value.code == 2


@patch("morreygate.cli.check_environment", return_value=[])
class TestCLICorpus:
    @patch("morreygate.cli.execute_corpus")
    def test_corpus_exits_0(self, mock_corpus, mock_env):
        mock_corpus.return_value = {"suite": "olsen", "function_count": 6}

        with pytest.raises(SystemExit) as exc:
            main(["corpus", "olsen", "--manifest", "m.json"])
        assert exc.value.code == 0
        assert mock_corpus.call_args.kwargs["manifest"] == "m.json"
