"""Optional thread parallelism, capped by the ``VSL_THREADS`` environment variable."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def max_workers() -> int:
    try:
        return max(1, int(os.environ.get("VSL_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """``list(map(fn, items))``, run on up to ``VSL_THREADS`` threads; order is preserved."""
    items = list(items)
    k = min(max_workers(), len(items))
    if k <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, items))
