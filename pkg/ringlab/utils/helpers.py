"""Helper utilities for RingLab."""

import time
from collections.abc import Callable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from typing import TypeVar

from ringlab.utils.config import config
from ringlab.utils.log import get_logger

T = TypeVar("T")

log = get_logger(__name__)


def chunk_ranges(total: int, size: int) -> list[tuple[int, int]]:
    """Split ``range(total)`` into consecutive ``(start, stop)`` pairs of at most ``size``."""
    size = max(1, size)
    return [(start, min(start + size, total)) for start in range(0, total, size)]


def balanced_ranges(total: int, jobs: int, minimum: int = 64) -> list[tuple[int, int]]:
    """Chunks sized so every worker gets a few of them."""
    if jobs <= 1:
        return chunk_ranges(total, max(total, 1))
    size = max(minimum, -(-total // (jobs * 4)))
    return chunk_ranges(total, size)


def resolve_jobs(jobs: int | None) -> int:
    """Worker count from the argument or the config default."""
    return max(1, jobs if jobs is not None else config.jobs)


def run_chunks(fn: Callable[..., T], chunks: Sequence, jobs: int | None = None) -> list[T]:
    """Run ``fn(chunk)`` over every chunk, results in chunk order.

    ``fn`` must be picklable (a module-level function or a ``functools.partial``
    of one) when more than one worker is used.
    """
    jobs = resolve_jobs(jobs)
    if jobs == 1 or len(chunks) <= 1:
        return [fn(chunk) for chunk in chunks]
    log.debug("dispatching %d chunks to %d workers", len(chunks), jobs)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, chunks))


@contextmanager
def stopwatch() -> Iterator[dict[str, float]]:
    """Measure wall time; the yielded dict gets a ``seconds`` entry on exit."""
    timing: dict[str, float] = {}
    start = time.perf_counter()
    try:
        yield timing
    finally:
        timing["seconds"] = round(time.perf_counter() - start, 6)


def pluralize(count: int, word: str) -> str:
    """``1 unit``, ``2 units``."""
    return f"{count} {word}" if count == 1 else f"{count} {word}s"
