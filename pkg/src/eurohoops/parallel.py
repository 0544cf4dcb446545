"""Ordered process-pool map; results come back in input order for any --jobs."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

_STATE = {}


def _init(key, value):
    _STATE[key] = value


def worker_state(key):
    return _STATE[key]


def ordered_map(fn, items, jobs: int = 1, shared: tuple | None = None, chunksize: int = 1):
    """``[fn(x) for x in items]``, optionally across ``jobs`` processes.

    ``shared`` = (key, value) is installed once per worker and read back
    with :func:`worker_state`.
    """
    items = list(items)
    if jobs is None or jobs <= 1 or len(items) <= 1:
        if shared is not None:
            _init(*shared)
        return [fn(x) for x in items]
    kwargs = {"initializer": _init, "initargs": shared} if shared is not None else {}
    with ProcessPoolExecutor(max_workers=jobs, **kwargs) as ex:
        return list(ex.map(fn, items, chunksize=chunksize))
