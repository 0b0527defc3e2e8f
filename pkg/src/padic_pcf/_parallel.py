"""Deterministic fan-out for bounded scans."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def default_workers() -> int:
    """Worker count from ``PCF_THREADS``, defaulting to 1 (serial)."""
    raw = os.environ.get("PCF_THREADS", "").strip()
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        return 1


def chunked(items: list[T], n: int) -> list[list[T]]:
    """Split ``items`` into at most ``n`` contiguous, nonempty chunks."""
    n = max(1, min(n, len(items)))
    size, extra = divmod(len(items), n)
    out, start = [], 0
    for i in range(n):
        stop = start + size + (1 if i < extra else 0)
        out.append(items[start:stop])
        start = stop
    return [c for c in out if c]


def pmap(fn: Callable[[T], R], tasks: Iterable[T], workers: int | None = None) -> list[R]:
    """``[fn(t) for t in tasks]``, optionally across processes.

    Results come back in task order whatever the worker count, so callers
    that sort their merged output get identical results for any ``workers``.
    """
    tasks = list(tasks)
    workers = default_workers() if workers is None else max(1, workers)
    if workers == 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(fn, tasks))
