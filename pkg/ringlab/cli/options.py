"""Options and output handling shared by the CLI commands."""

from collections.abc import Callable
from enum import Enum
from pathlib import Path
from typing import NamedTuple, NoReturn

import typer
from rich.console import Console

from ringlab.core.algebra import Element, FiniteAlgebra
from ringlab.core.catalog import parse_element
from ringlab.core.errors import RingLabError
from ringlab.data.reports import ErrorInfo, Report, RingFingerprint
from ringlab.data.ringspec import RingSpecFile, load_ring
from ringlab.utils.helpers import stopwatch

EXIT_OK = 0
EXIT_FAILED = 1  # verification or mathematical failure
EXIT_USAGE = 2  # usage or parse error

err_console = Console(stderr=True)


class OutputFormat(str, Enum):
    JSON = "json"
    TABLE = "table"


RING = typer.Option(None, "--ring", "-r", help="Preset name (e.g. 'M(3,2)') or inline spec JSON")
RING_FILE = typer.Option(
    None, "--ring-file", "-f", help="Ring-spec JSON file", exists=True, dir_okay=False
)
ELEMENT = typer.Option(..., "--element", "-e", help="Element: 'e12+e23', '[0,1,0,0]', 'J' or '1'")
JOBS = typer.Option(None, "--jobs", "-j", min=1, help="Worker processes for exhaustive scans")
FORMAT = typer.Option(OutputFormat.JSON, "--format", help="Report format")


class Inputs(NamedTuple):
    R: FiniteAlgebra
    spec: RingSpecFile


def new_report(command: str, arguments: dict) -> Report:
    return Report(command=command, arguments=arguments)


def load_inputs(report: Report, ring: str | None, ring_file: Path | None) -> Inputs:
    """Build the ring into ``report``; a bad spec is a usage error."""
    try:
        R, spec = load_ring(ring, ring_file)
    except RingLabError as exc:
        fail(report, exc, EXIT_USAGE)
    report.ring = RingFingerprint.of(R)
    report.ring_spec = spec
    return Inputs(R, spec)


def load_element(report: Report, R: FiniteAlgebra, text: str) -> Element:
    try:
        return parse_element(R, text)
    except RingLabError as exc:
        fail(report, exc, EXIT_USAGE)


def fail(report: Report, exc: RingLabError, code: int = EXIT_FAILED) -> NoReturn:
    """Record the error, print the report and exit."""
    report.error = ErrorInfo.from_error(exc)
    typer.echo(report.to_json())
    err_console.print(f"[red]{exc.code}: {exc.message}[/red]")
    raise typer.Exit(code)


def finish(report: Report, fmt: OutputFormat, render=None) -> None:
    """Write the report (JSON, or tables via ``render``) and exit with its verdict."""
    if fmt is OutputFormat.TABLE and render is not None:
        render(report)
    else:
        typer.echo(report.to_json())
    if report.error is not None:
        err_console.print(f"[red]{report.error.code}: {report.error.message}[/red]")
        raise typer.Exit(EXIT_FAILED)
    failed = report.failed_checks
    if failed:
        for check in failed:
            err_console.print(f"[red]FAILED[/red] {check.name} {check.detail}")
        raise typer.Exit(EXIT_FAILED)


def compute(report: Report, body: Callable[[], None]) -> None:
    """Run ``body`` timed; a domain error becomes the report's error."""
    with stopwatch() as timing:
        try:
            body()
        except RingLabError as exc:
            report.error = ErrorInfo.from_error(exc)
    report.timing = dict(timing)
