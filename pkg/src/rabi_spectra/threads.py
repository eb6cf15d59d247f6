"""Optional thread parallelism for E-grid scans.

RABI_SPECTRA_THREADS caps the worker count; 0 or unset means auto
(min(4, cpu_count)).  Results are merged in grid order, so the output is
deterministic regardless of the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    raw = os.environ.get("RABI_SPECTRA_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = min(4, os.cpu_count() or 1)
    return max(1, n)


def scan_map(fn, xs):
    """Ordered map; threaded when more than one worker is allowed."""
    xs = list(xs)
    n = thread_count()
    if n == 1 or len(xs) < 4:
        return [fn(x) for x in xs]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, xs))
