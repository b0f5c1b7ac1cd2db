"""Thread-budget helper for sector sweeps.

TWOMODE_JCX_THREADS caps worker threads (0 or unset = one per CPU). Sector
eigensolves release the GIL inside LAPACK, so threads are enough here.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_budget() -> int:
    raw = os.environ.get("TWOMODE_JCX_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def parallel_map(fn, items):
    """Ordered map over items, threaded when the budget and workload allow."""
    items = list(items)
    budget = min(thread_budget(), len(items))
    if budget <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=budget) as pool:
        return list(pool.map(fn, items))
