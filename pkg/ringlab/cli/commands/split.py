"""Idempotent power splitting command."""

from pathlib import Path

from ringlab.cli.options import (
    ELEMENT,
    FORMAT,
    RING,
    RING_FILE,
    OutputFormat,
    compute,
    finish,
    load_element,
    load_inputs,
    new_report,
)
from ringlab.cli.ui.displays import display_split
from ringlab.core.algebra import peirce_dimensions
from ringlab.core.errors import RingLabError
from ringlab.core.regularity import idempotent_power_split
from ringlab.core.theorems import CheckResult, split_unit_witness


def split(
    ring: str = RING,
    ring_file: Path = RING_FILE,
    element: str = ELEMENT,
    fmt: OutputFormat = FORMAT,
) -> None:
    """Split a = ea + (1-e)a along the idempotent power e = a^m."""
    report = new_report("split", {"element": element})
    R, _ = load_inputs(report, ring, ring_file)
    a = load_element(report, R, element)

    def body() -> None:
        data = idempotent_power_split(a)
        unit_part = data.unit_corner.from_corner(data.unit_part)
        nil_part = data.nil_corner.from_corner(data.nil_part)
        payload = {
            "element": str(a),
            "m": data.m,
            "e": str(data.e),
            "e_coords": data.e.coords.tolist(),
            "unit_part": str(unit_part),
            "unit_part_coords": unit_part.coords.tolist(),
            "unit_inverse": str(data.unit_corner.from_corner(data.unit_inverse)),
            "nil_part": str(nil_part),
            "nil_part_coords": nil_part.coords.tolist(),
            "nil_index": data.nil_index,
            "corner_dims": [data.unit_corner.corner.dim, data.nil_corner.corner.dim],
            "peirce_dimensions": list(peirce_dimensions(data.e)),
        }
        report.result["split"] = payload
        report.verification = [
            CheckResult(name=name, passed=held) for name, held in data.checks().items()
        ]
        try:
            witness = split_unit_witness(data)
        except RingLabError as exc:
            payload["witness_error"] = f"{exc.code}: {exc.message}"
            return
        payload["u"] = str(witness.u)
        payload["u_coords"] = witness.u.coords.tolist()
        report.verification += [
            CheckResult(name="assembled u is a unit", passed=witness.u.is_unit),
            CheckResult(name="aua = a", passed=a * witness.u * a == a),
        ]

    compute(report, body)
    finish(report, fmt, display_split)
