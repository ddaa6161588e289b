"""Tests for helper utilities."""

from functools import partial

import pytest

from ringlab.utils import config as config_module
from ringlab.utils.helpers import (
    balanced_ranges,
    chunk_ranges,
    pluralize,
    resolve_jobs,
    run_chunks,
    stopwatch,
)


def _range_sum(offset, bounds):
    return offset + sum(range(*bounds))


class TestChunkRanges:
    """Tests for chunk_ranges and balanced_ranges."""

    def test_exact_cover(self):
        """Chunks cover the range in order without overlap."""
        assert chunk_ranges(10, 4) == [(0, 4), (4, 8), (8, 10)]

    def test_empty(self):
        """Nothing to split gives no chunks."""
        assert chunk_ranges(0, 4) == []

    def test_single_worker(self):
        """One worker gets one chunk."""
        assert balanced_ranges(100, 1) == [(0, 100)]

    def test_several_workers(self):
        """Several workers get chunks of at least the minimum size."""
        ranges = balanced_ranges(1000, 4, minimum=16)
        assert ranges[0][0] == 0 and ranges[-1][1] == 1000
        assert all(stop - start >= 16 for start, stop in ranges[:-1])


class TestRunChunks:
    """Tests for run_chunks."""

    @pytest.mark.parametrize("jobs", [1, 2])
    def test_order_preserved(self, jobs):
        """Results come back in chunk order for any worker count."""
        chunks = chunk_ranges(100, 10)
        results = run_chunks(partial(_range_sum, 0), chunks, jobs)
        assert results == [sum(range(*c)) for c in chunks]

    def test_resolve_jobs_default(self, monkeypatch):
        """None falls back to the configured worker count."""
        monkeypatch.setattr(config_module.config, "jobs", 3)
        assert resolve_jobs(None) == 3
        assert resolve_jobs(0) == 1


class TestStopwatch:
    """Tests for stopwatch."""

    def test_records_seconds(self):
        """The timing dict gets a non-negative seconds entry."""
        with stopwatch() as timing:
            pass
        assert timing["seconds"] >= 0


class TestPluralize:
    """Tests for pluralize."""

    def test_singular(self):
        assert pluralize(1, "unit") == "1 unit"

    def test_plural(self):
        assert pluralize(3, "unit") == "3 units"
