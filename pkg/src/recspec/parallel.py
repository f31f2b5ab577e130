"""Deterministic trial-level parallelism.

Monte Carlo drivers farm independent trials over a thread pool and merge the
results by trial index.  LAPACK/BLAS is pinned to one internal thread for the
duration of the parallel region: each trial's floating-point result is then a
pure function of its inputs, so output bytes cannot depend on the worker
count, and trial-level threads scale without oversubscription (numpy releases
the GIL inside LAPACK).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

from threadpoolctl import threadpool_limits

T = TypeVar("T")


def map_indexed(work: Callable[[int], T], count: int, threads: int = 1) -> list[T | Exception]:
    """Run ``work(i)`` for i in range(count), returning results in index order.

    A failed trial contributes its exception instead of a result; callers
    decide whether to abort or report.  ``threads`` caps concurrency and never
    affects the values returned.
    """
    if threads < 1:
        raise ValueError(f"threads must be at least 1, got {threads}")

    def guarded(i: int) -> T | Exception:
        try:
            return work(i)
        except Exception as exc:  # propagated per-trial, merged by index
            return exc

    with threadpool_limits(limits=1):
        if threads == 1 or count == 1:
            return [guarded(i) for i in range(count)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(guarded, range(count)))
