from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def pmap(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """Order-preserving map; spreads over processes when ``workers > 1``.

    Callers sort the merged output canonically, so results never depend on
    the worker count.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def chunked(seq: list, parts: int) -> list[list]:
    parts = max(1, parts)
    size = -(-len(seq) // parts) if seq else 1
    return [seq[i:i + size] for i in range(0, len(seq), size)]
