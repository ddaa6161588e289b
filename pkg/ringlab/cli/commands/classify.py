"""Exhaustive element classification command."""

from pathlib import Path

import typer

from ringlab.cli.commands.describe import matrix_shape
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
from ringlab.cli.ui.displays import display_classification
from ringlab.core.catalog import gl_order, nilpotent_matrix_count
from ringlab.core.regularity import ClassificationSummary, classify_all
from ringlab.core.theorems import CheckResult


def classify(
    ring: str = RING,
    ring_file: Path = RING_FILE,
    jobs: int = JOBS,
    summary_only: bool = typer.Option(False, "--summary-only", help="Omit per-element rows"),
    fmt: OutputFormat = FORMAT,
) -> None:
    """Profile every element: unit, idempotent, nilpotent, regular, unit-regular."""
    report = new_report("classify", {"summary_only": summary_only})
    R, spec = load_inputs(report, ring, ring_file)

    def body() -> None:
        profiles = classify_all(R, jobs)
        summary = ClassificationSummary.from_profiles(profiles)
        report.result["summary"] = summary.model_dump()
        if not summary_only:
            report.result["profiles"] = [profile.model_dump(mode="json") for profile in profiles]
        report.verification = [
            CheckResult(name="profile flags consistent", passed=True),
            CheckResult(
                name="unit-regularity routes agree",
                passed=summary.route_disagreements == 0,
                detail=f"{summary.route_disagreements} disagreements, {summary.unknown} unknown",
            ),
        ]
        shape = matrix_shape(spec)
        if shape is not None:
            n, p = shape
            report.verification += [
                CheckResult(
                    name="unit count = |GL_n(F_p)|",
                    passed=summary.units == gl_order(n, p),
                    detail=f"{summary.units} vs {gl_order(n, p)}",
                ),
                CheckResult(
                    name="nilpotent count = p^(n^2-n)",
                    passed=summary.nilpotents == nilpotent_matrix_count(n, p),
                    detail=f"{summary.nilpotents} vs {nilpotent_matrix_count(n, p)}",
                ),
            ]

    compute(report, body)
    finish(report, fmt, display_classification)
