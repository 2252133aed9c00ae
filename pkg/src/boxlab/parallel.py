"""Deterministic helper for optional thread-based parallelism.

Results are collected in submission order, so output never depends on the
thread count; with exact rational arithmetic this makes parallel runs
byte-for-byte reproducible.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    work = list(items)
    if threads <= 1 or len(work) <= 1:
        return [fn(it) for it in work]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, work))
