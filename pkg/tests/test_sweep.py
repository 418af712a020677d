from __future__ import annotations

import math
import threading
import time

from morreygate.sweep import run_cells, spread


class TestRunCells:
    def test_serial(self):
        assert run_cells(lambda x: x * x, [1, 2, 3]) == [1, 4, 9]

    def test_threaded_results_keep_input_order(self):
        def slow_square(x: int) -> int:
            time.sleep(0.01 * (5 - x))
            return x * x

        assert run_cells(slow_square, range(5), threads=4) == [0, 1, 4, 9, 16]

    def test_threads_are_used(self):
        seen: set[int] = set()

        def record(x: int) -> int:
            seen.add(threading.get_ident())
            time.sleep(0.02)
            return x

        run_cells(record, range(8), threads=4)
        assert len(seen) > 1

    def test_empty(self):
        assert run_cells(lambda x: x, [], threads=3) == []


class TestSpread:
    def test_relative_range(self):
        assert spread([1.0, 2.0, 4.0]) == 0.75

    def test_constant_values(self):
        assert spread([3.0, 3.0]) == 0.0

    def test_unusable_values_are_dropped(self):
        assert spread([2.0, math.nan, math.inf, -1.0, 0.0, 1.0]) == 0.5

    def test_nothing_usable(self):
        assert spread([0.0, -2.0]) is None
        assert spread([]) is None
