# stdlib
import time
from typing import Any, Callable, List, Optional, Sequence, Tuple

# third party
from joblib import Parallel, cpu_count, delayed

# dpartitions absolute
import dpartitions.logger as log
from dpartitions.utils.constants import DEFAULT_JOBS


def resolve_jobs(n_jobs: Optional[int]) -> int:
    """None -> configured default, -1 -> every core, otherwise at least 1."""
    if n_jobs is None:
        n_jobs = DEFAULT_JOBS
    if n_jobs < 0:
        return cpu_count()
    return max(1, n_jobs)


def chunk_range(lo: int, hi: int, chunks: int) -> List[Tuple[int, int]]:
    """Split [lo, hi] into at most `chunks` contiguous, ordered, non-empty ranges."""
    if hi < lo:
        return []
    size = hi - lo + 1
    chunks = max(1, min(chunks, size))
    step, extra = divmod(size, chunks)
    out = []
    start = lo
    for k in range(chunks):
        stop = start + step + (1 if k < extra else 0) - 1
        out.append((start, stop))
        start = stop + 1
    return out


def _timed_call(func: Callable, *args: Any) -> Any:
    start = time.time()
    log.debug(f" >> {func.__name__}{args[-2:]}")
    result = func(*args)
    log.debug(f" >> {func.__name__}{args[-2:]} done. Duration: {time.time() - start:.3f} s")
    return result


def map_ranges(
    func: Callable[..., Sequence],
    lo: int,
    hi: int,
    n_jobs: Optional[int] = None,
    shared: Tuple = (),
) -> List:
    """
    Evaluate func(*shared, start, stop) over contiguous chunks of [lo, hi] and
    concatenate the results in chunk order, so the output does not depend on
    the worker count.
    """
    jobs = resolve_jobs(n_jobs)
    ranges = chunk_range(lo, hi, jobs)
    if jobs == 1 or len(ranges) <= 1:
        parts = [_timed_call(func, *shared, start, stop) for start, stop in ranges]
    else:
        dispatcher = Parallel(n_jobs=jobs)
        parts = dispatcher(
            delayed(_timed_call)(func, *shared, start, stop) for start, stop in ranges
        )
    merged: List = []
    for part in parts:
        merged.extend(part)
    return merged
