import os
from collections.abc import Callable, Iterable
from typing import Any

from joblib import Parallel, delayed

from ._const import THREADS_ENV
from ._logging import LOGGER

__all__ = ("worker_count", "parallel_map")


def worker_count() -> int:
    """Number of workers to use, capped by the `PHOTONQ_THREADS` environment variable.

    Returns:
        int: worker count (at least 1).
    """
    n = os.cpu_count() or 1
    cap = os.environ.get(THREADS_ENV)
    if cap is not None:
        try:
            n = min(n, int(cap))
        except ValueError:
            LOGGER.warning(f"Ignoring invalid {THREADS_ENV}={cap!r}")
    return max(n, 1)


def parallel_map(fn: Callable[[Any], Any], items: Iterable[Any]) -> list[Any]:
    """Apply `fn` to every item, possibly in parallel threads. Result order follows `items`.

    Args:
        fn (Callable[[Any], Any]): function to apply.
        items (Iterable[Any]): inputs.

    Returns:
        list[Any]: outputs in input order.
    """
    items = list(items)
    n_jobs = min(worker_count(), max(len(items), 1))
    if n_jobs == 1:
        return [fn(item) for item in items]
    # numpy and scipy release the GIL in the heavy parts
    return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(fn)(item) for item in items)
