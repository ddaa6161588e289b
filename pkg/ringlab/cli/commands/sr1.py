"""Stable range one command."""

from pathlib import Path

import numpy as np
import typer

from ringlab.cli.options import (
    FORMAT,
    JOBS,
    RING,
    RING_FILE,
    OutputFormat,
    compute,
    finish,
    load_inputs,
    new_report,
)
from ringlab.cli.ui.displays import display_sr1
from ringlab.core.regularity import stable_range_one
from ringlab.core.theorems import CheckResult


def sr1(
    ring: str = RING,
    ring_file: Path = RING_FILE,
    jobs: int = JOBS,
    inject_fault: bool = typer.Option(
        False, "--inject-fault", help="Count no element as a unit (exercises counterexamples)"
    ),
    fmt: OutputFormat = FORMAT,
) -> None:
    """Check aR + bR = R => a + by is a unit for some y, over every pair."""
    report = new_report("sr1", {"inject_fault": inject_fault})
    R, _ = load_inputs(report, ring, ring_file)

    def body() -> None:
        units = np.zeros(R.order, dtype=bool) if inject_fault else None
        result = stable_range_one(R, jobs, units=units)
        report.result = result.model_dump()
        report.verification = [
            CheckResult(
                name="stable range one",
                passed=result.holds,
                detail=f"{result.pairs_checked} pairs",
            )
        ]

    compute(report, body)
    finish(report, fmt, display_sr1)
