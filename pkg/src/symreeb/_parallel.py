"""Process-parallel map for work items that hold closures.

Models and chord paths carry lambdas and ODE solutions, which do not
pickle. With the ``fork`` start method the items are inherited by the
workers and only indices and results cross the process boundary.
"""

from __future__ import annotations

import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence

_JOB = None  # (fn, items) inherited by forked workers


def _call(i: int):
    fn, items = _JOB
    return fn(*items[i])


def parallel_map(fn: Callable, items: Sequence[tuple], workers: int = 1) -> List:
    """``[fn(*args) for args in items]``, in order, on up to ``workers`` processes."""
    global _JOB
    if workers <= 1 or len(items) <= 1 or "fork" not in mp.get_all_start_methods():
        return [fn(*args) for args in items]
    _JOB = (fn, list(items))
    try:
        with ProcessPoolExecutor(max_workers=min(workers, len(items)),
                                 mp_context=mp.get_context("fork")) as ex:
            return list(ex.map(_call, range(len(items))))
    finally:
        _JOB = None
