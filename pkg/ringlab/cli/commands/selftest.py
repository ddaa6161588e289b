"""Self-test command."""

import typer

from ringlab.cli.options import FORMAT, JOBS, OutputFormat, compute, finish, new_report
from ringlab.cli.ui.displays import display_selftest
from ringlab.core.acceptance import CHECKS, run_selftest
from ringlab.core.theorems import CheckResult


def selftest(
    jobs: int = JOBS,
    quick: bool = typer.Option(False, "--quick", "-q", help="Smaller rings and fewer trials"),
    only: list[int] = typer.Option(
        None, "--only", help=f"Run only these checks, 1-{len(CHECKS)} (repeatable)"
    ),
    fmt: OutputFormat = FORMAT,
) -> None:
    """Run the acceptance checks; exits 1 if any fails."""
    report = new_report("selftest", {"quick": quick, "only": only or []})

    def body() -> None:
        results = run_selftest(jobs, quick=quick, only=only)
        report.result["checks"] = [result.model_dump() for result in results]
        report.verification = [
            CheckResult(name=result.name, passed=result.passed, detail=result.detail)
            for result in results
        ]

    compute(report, body)
    finish(report, fmt, display_selftest)
