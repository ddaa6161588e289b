"""Tests for the acceptance checks behind ``ringlab selftest``."""

import pytest

from ringlab.core.acceptance import (
    CHECKS,
    FULL,
    QUICK,
    catalog_rings,
    check_negative_controls,
    check_theorem_sweep,
    run_selftest,
)


class TestSelftest:
    """Tests for run_selftest."""

    def test_numbering(self):
        """Checks are numbered from 1 in order."""
        results = run_selftest(quick=True, only=[9])
        assert [r.number for r in results] == [9]
        assert results[0].name == CHECKS[8][0]

    @pytest.mark.parametrize("number", [1, 2, 3, 7, 9, 10])
    def test_quick_checks_pass(self, number):
        """The cheaper checks pass in quick mode."""
        (result,) = run_selftest(quick=True, only=[number])
        assert result.passed, result.failures

    def test_negative_controls_detail(self):
        """Both non-regular controls are rejected by both routes."""
        outcome = check_negative_controls(QUICK, 1)
        assert outcome.failures == []

    def test_sweep_builds_both_routes(self):
        """Every qualifying nilpotent gets both chains, both witnesses and matching E_n."""
        outcome = check_theorem_sweep(QUICK, 1)
        assert outcome.failures == []
        assert "both routes" in outcome.detail
        assert int(outcome.detail.split()[0]) > 0

    @pytest.mark.slow
    def test_full_run(self):
        """Every check passes at full size."""
        results = run_selftest()
        assert len(results) == len(CHECKS)
        assert all(r.passed for r in results), [r.failures for r in results if not r.passed]


class TestCatalogRings:
    """Tests for the sweep catalogue."""

    def test_limit(self):
        """Only rings up to the size limit are returned."""
        assert all(R.order <= QUICK.sweep for R in catalog_rings(QUICK.sweep))
        assert len(catalog_rings(FULL.sweep)) > len(catalog_rings(QUICK.sweep))
