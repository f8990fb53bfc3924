"""Ordered worker pool for independent per-frame and per-task computations."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> list[R]:
    """Apply *fn* to every item and return results in input order.

    With ``jobs <= 1`` this is a plain loop.  Otherwise a thread pool runs the
    tasks; numpy releases the GIL inside FFTs and ufuncs, which is where the
    time goes.  Assembly order never depends on completion order.
    """
    work = list(items)
    if jobs <= 1 or len(work) <= 1:
        return [fn(item) for item in work]
    with ThreadPoolExecutor(max_workers=min(jobs, len(work))) as pool:
        return list(pool.map(fn, work))
