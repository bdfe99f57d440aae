"""LRU memo with single-flight de-duplication.

Holds results that depend only on the target filter: the denominator solve and
the rationalization for a fixed float ``C``. Concurrent misses for the same key
(tool calls run in worker threads) collapse into one computation. The cache is
bounded to ``CACHE_MAX_ENTRIES`` (oldest evicted first). Objective values are
never stored here.
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from collections.abc import Callable, Hashable
from typing import Any

from .config import CACHE_MAX_ENTRIES

_cache: OrderedDict[Hashable, Any] = OrderedDict()
# key -> lock guarding the single-flight computation for that key
_locks: dict[Hashable, threading.Lock] = {}
_guard = threading.Lock()


def cache_get(key: Hashable) -> Any | None:
    """Return a cached value, or ``None`` if missing."""
    with _guard:
        if key not in _cache:
            return None
        _cache.move_to_end(key)  # mark most-recently-used
        return _cache[key]


def cache_set(key: Hashable, value: Any) -> None:
    """Store a value, evicting the least-recently-used entry (and its lock) if over capacity."""
    with _guard:
        _cache[key] = value
        _cache.move_to_end(key)
        while len(_cache) > CACHE_MAX_ENTRIES:
            evicted, _ = _cache.popitem(last=False)
            _locks.pop(evicted, None)


def clear() -> None:
    """Drop all cached values and in-flight locks (used by tests and shutdown)."""
    with _guard:
        _cache.clear()
        _locks.clear()


def size() -> int:
    with _guard:
        return len(_cache)


def _lock_for(key: Hashable) -> threading.Lock:
    with _guard:
        lock = _locks.get(key)
        if lock is None:
            lock = threading.Lock()
            _locks[key] = lock
        return lock


def get_or_compute[T](key: Hashable, compute: Callable[[], T]) -> T:
    """Return the cached value or run ``compute`` once and cache its result.

    Exceptions propagate and nothing is cached, so an infeasible target is
    re-diagnosed on the next call.
    """
    cached = cache_get(key)
    if cached is not None:
        return cached  # type: ignore[no-any-return]

    with _lock_for(key):
        # Another thread may have populated the entry while we waited.
        cached = cache_get(key)
        if cached is not None:
            return cached  # type: ignore[no-any-return]

        value = compute()
        cache_set(key, value)
        return value
