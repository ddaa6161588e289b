"""Ring and element description command."""

import re
from pathlib import Path

import typer

from ringlab.cli.options import (
    FORMAT,
    JOBS,
    RING,
    RING_FILE,
    OutputFormat,
    compute,
    finish,
    load_element,
    load_inputs,
    new_report,
)
from ringlab.cli.ui.displays import display_describe
from ringlab.core.algebra import Element, FiniteAlgebra, peirce_dimensions
from ringlab.core.catalog import gl_order, nilpotent_matrix_count
from ringlab.core.regularity import (
    ClassificationSummary,
    classify_all,
    nilpotency_data,
    pi_chain_dims,
    profile_element,
    unit_count,
)
from ringlab.core.theorems import CheckResult
from ringlab.data.reports import Report
from ringlab.data.ringspec import RingSpecFile
from ringlab.utils.config import config

MATRIX_PRESET = re.compile(r"^\s*M\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")


def matrix_shape(spec: RingSpecFile) -> tuple[int, int] | None:
    """(n, p) when the ring is the preset M(n,p), whose counts have closed forms."""
    if spec.preset is None:
        return None
    found = MATRIX_PRESET.match(spec.preset)
    return (int(found[1]), int(found[2])) if found else None


def describe_ring(
    report: Report, R: FiniteAlgebra, spec: RingSpecFile, jobs: int | None
) -> None:
    info = report.result
    info.update(
        name=R.name,
        order=R.order,
        labels=list(R.labels),
        one=str(R.identity()),
        enumerable=R.order <= config.element_cap,
    )
    if R.order > config.element_cap:
        return
    units = unit_count(R, jobs)
    info["units"] = units
    shape = matrix_shape(spec)
    if shape is None:
        return
    n, p = shape
    summary = ClassificationSummary.from_profiles(classify_all(R, jobs))
    info["gl_order"] = gl_order(n, p)
    info["nilpotent_count"] = nilpotent_matrix_count(n, p)
    report.verification += [
        CheckResult(
            name="unit count = |GL_n(F_p)|",
            passed=units == info["gl_order"],
            detail=f"{units} vs {info['gl_order']}",
        ),
        CheckResult(
            name="nilpotent count = p^(n^2-n)",
            passed=summary.nilpotents == info["nilpotent_count"],
            detail=f"{summary.nilpotents} vs {info['nilpotent_count']}",
        ),
    ]


def describe_element(report: Report, a: Element) -> None:
    R = a.algebra
    profile = profile_element(a, int(R.index_of(a.coords)))
    report.result["element"] = profile.model_dump(mode="json")
    report.result["pi_chain_dims"] = [list(dims) for dims in pi_chain_dims(a)]
    report.result["power_cycle"] = list(nilpotency_data(a).cycle)
    if profile.is_idempotent:
        report.result["peirce_dimensions"] = list(peirce_dimensions(a))
    report.verification.append(
        CheckResult(
            name="profile flags consistent",
            passed=not profile.inconsistencies(R.dim),
            detail=", ".join(profile.inconsistencies(R.dim)),
        )
    )


def describe(
    ring: str = RING,
    ring_file: Path = RING_FILE,
    element: str = typer.Option(None, "--element", "-e", help="Also profile this element"),
    jobs: int = JOBS,
    fmt: OutputFormat = FORMAT,
) -> None:
    """Describe a ring: basis, identity, unit count, and optionally one element."""
    report = new_report("describe", {"element": element})
    R, spec = load_inputs(report, ring, ring_file)
    a = load_element(report, R, element) if element else None

    def body() -> None:
        describe_ring(report, R, spec, jobs)
        if a is not None:
            describe_element(report, a)

    compute(report, body)
    finish(report, fmt, display_describe)
