from __future__ import annotations

from unittest.mock import patch

from morreygate.env import REFINE_MEMORY_WARN_BYTES, capture_environment, check_environment


class TestCheckEnvironment:
    def test_plain_run_is_quiet(self):
        assert check_environment(command="run") == []

    def test_no_fft_backend_warning(self):
        # scipy.fft is the only transform backend
        assert not any("fft" in w.lower() for w in check_environment(command="run"))

    def test_non_run_command_skips_memory_check(self):
        points = REFINE_MEMORY_WARN_BYTES // 128 + 1
        assert check_environment(command="report", refine=True, grid_points=points) == []

    @patch("morreygate.env.os.cpu_count", return_value=2)
    def test_warns_when_threads_exceed_cpus(self, mock_cpus):
        warnings = check_environment(command="list-suites", threads=8)
        assert any("8 threads" in w for w in warnings)

    def test_warns_on_large_refined_grid(self):
        points = REFINE_MEMORY_WARN_BYTES // 128 + 1
        warnings = check_environment(command="run", refine=True, grid_points=points)
        assert any("GiB" in w for w in warnings)

    def test_small_refined_grid_is_quiet(self):
        assert check_environment(command="run", refine=True, grid_points=2048) == []


class TestCaptureEnvironment:
    def test_returns_environment_info(self):
        env = capture_environment()
        assert env.python_version  # non-empty
        assert env.platform  # non-empty
        assert isinstance(env.packages, dict)

    @patch("morreygate.env.importlib.metadata.version", return_value="9.9.9")
    def test_tracks_numeric_stack(self, mock_version):
        packages = capture_environment().packages
        assert packages["numpy"] == "9.9.9"
        assert packages["scipy"] == "9.9.9"
