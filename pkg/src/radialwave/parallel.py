"""Thread-count policy shared by the parallel sweeps."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable

from .core import ConfigError

ENV_VAR = "RADIALWAVE_THREADS"


def worker_count(default: int = 4) -> int:
    """Worker cap from RADIALWAVE_THREADS (a positive integer), else ``default``."""
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw.strip() == "":
        return max(1, min(default, os.cpu_count() or 1))
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{ENV_VAR} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"{ENV_VAR} must be a positive integer, got {raw!r}")
    return value


def pmap(fn: Callable, items: Iterable) -> list:
    """Ordered map over a thread pool capped by :func:`worker_count`."""
    items = list(items)
    workers = min(worker_count(), len(items)) if items else 1
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
