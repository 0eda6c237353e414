"""
Thread fan-out for independent runs (certify sweeps, simulations)

numpy/scipy release the GIL inside the dense kernels, so plain threads are
enough. Results always come back in input order.
"""

import concurrent.futures
from typing import Callable, Iterable, List, Optional, TypeVar

from ..config import settings

T = TypeVar("T")
R = TypeVar("R")


def worker_count(n_items: int, threads: Optional[int] = None) -> int:
    cap = settings.threads if threads is None else threads
    return max(1, min(int(cap), n_items))


def parallel_map(
    fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None
) -> List[R]:
    """Apply fn to every item, fanning out to at most `threads` workers"""
    work = list(items)
    max_w = worker_count(len(work), threads)
    if max_w <= 1:
        return [fn(item) for item in work]

    with concurrent.futures.ThreadPoolExecutor(max_workers=max_w) as pool:
        futures = [pool.submit(fn, item) for item in work]
        return [f.result() for f in futures]
