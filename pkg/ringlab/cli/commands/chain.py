"""Decomposition chain command."""

from pathlib import Path

import typer

from ringlab.cli.options import (
    ELEMENT,
    FORMAT,
    RING,
    RING_FILE,
    OutputFormat,
    finish,
    load_element,
    load_inputs,
    new_report,
)
from ringlab.cli.ui.displays import display_chain
from ringlab.data.reports import chain_report


def _theorem(value: int) -> int:
    if value not in (2, 4):
        raise typer.BadParameter("must be 2 (exchange route) or 4 (regular-powers route)")
    return value


def chain(
    ring: str = RING,
    ring_file: Path = RING_FILE,
    element: str = ELEMENT,
    theorem: int = typer.Option(4, "--theorem", "-t", callback=_theorem, help="2 or 4"),
    levels: int = typer.Option(None, "--levels", "-n", min=1, help="Level count"),
    output: Path = typer.Option(None, "--output", "-o", help="Also write the report here"),
    fmt: OutputFormat = FORMAT,
) -> None:
    """Build, verify and certify the decomposition chain for an element."""
    arguments = {"element": element, "theorem": theorem, "levels": levels}
    loading = new_report("chain", arguments)
    R, spec = load_inputs(loading, ring, ring_file)
    a = load_element(loading, R, element)

    report = chain_report(spec, R, a, theorem, levels, element)
    if output is not None:
        output.write_text(report.to_json() + "\n")
    finish(report, fmt, display_chain)
