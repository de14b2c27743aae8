"""Order-preserving process-pool map."""

import os
from concurrent.futures import ProcessPoolExecutor


def default_jobs():
    return os.cpu_count() or 1


def ordered_map(fn, items, jobs=None, chunksize=None):
    """``list(map(fn, items))`` spread over ``jobs`` worker processes.

    Results come back in input order whatever the completion order, so the
    output is identical for every ``jobs`` value. ``jobs=1`` stays in
    process. ``fn`` must be picklable (a module-level function).
    """
    items = list(items)
    jobs = default_jobs() if jobs in (None, 0) else int(jobs)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    jobs = min(jobs, len(items))
    if chunksize is None:
        chunksize = max(1, len(items) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))
