from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


def run_cells(task: Callable[[T], R], cells: Iterable[T], *, threads: int = 1) -> list[R]:
    """Evaluate independent cells; results come back in input order whatever the thread count."""
    items = list(cells)
    if threads <= 1 or len(items) <= 1:
        return [task(item) for item in items]
    logger.debug("sweeping %d cells on %d threads", len(items), threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(task, items))


def spread(values: Sequence[float]) -> float | None:
    """(max - min) / max over positive finite values; None when nothing usable remains."""
    usable = [v for v in values if v is not None and v == v and v not in (float("inf"), float("-inf")) and v > 0]
    if not usable:
        return None
    hi = max(usable)
    return (hi - min(usable)) / hi
