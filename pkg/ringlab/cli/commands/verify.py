"""Re-verification of saved chain reports."""

from pathlib import Path

import typer

from ringlab.cli.options import EXIT_USAGE, FORMAT, OutputFormat, compute, fail, finish, new_report
from ringlab.cli.ui.displays import display_chain
from ringlab.core.errors import ReportFormatError
from ringlab.data.reports import Report, verify_report


def verify(
    path: Path = typer.Argument(..., exists=True, dir_okay=False, help="A saved chain report"),
    fmt: OutputFormat = FORMAT,
) -> None:
    """Re-check every invariant of a saved chain report from its contents alone."""
    report = new_report("verify", {"report": path.name})
    try:
        saved = Report.from_json(path.read_text())
    except ReportFormatError as exc:
        fail(report, exc, EXIT_USAGE)
    report.ring = saved.ring
    report.ring_spec = saved.ring_spec
    report.result = saved.result

    def body() -> None:
        report.verification = verify_report(saved)

    compute(report, body)
    if report.error is not None and report.error.code == ReportFormatError.code:
        fail(report, ReportFormatError(report.error.message), EXIT_USAGE)
    finish(report, fmt, display_chain)
