from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """
    PURPOSE: Map a pure function over items, optionally on a thread pool
    DESCRIPTION: Results always come back in input order, so any reduction done by the caller
    in that order is independent of scheduling and thread count.
    ARGUMENTS:
        fn: Callable[[T], R] - Pure task function
        items: Iterable[T] - Task inputs
        threads: int - Worker count; 1 runs inline
    RETURNS: list[R] - fn(item) for every item, in input order
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
