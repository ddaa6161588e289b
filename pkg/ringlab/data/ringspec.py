"""Ring-spec files: the JSON form a ring is given in on the command line or on disk.

Exactly one of ``preset`` or ``explicit`` is present::

    {"preset": "prod(M(2,2),T(2,2))"}
    {"explicit": {"p": 2, "dim": 2, "one": [1, 0],
                  "mul": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]},
     "labels": ["1", "g"], "name": "F2[C2]"}

Unknown keys are rejected everywhere.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from ringlab.core.algebra import FiniteAlgebra, build_algebra
from ringlab.core.catalog import catalog
from ringlab.core.errors import RingSpecSyntaxError


class ExplicitTable(BaseModel):
    """Structure constants: ``mul[i][j][k]`` is the b_k coefficient of b_i * b_j."""

    model_config = ConfigDict(extra="forbid")

    p: int
    dim: int
    one: list[int]
    mul: list[list[list[int]]]

    @model_validator(mode="after")
    def check_arity(self) -> ExplicitTable:
        d = self.dim
        if d < 0:
            raise ValueError("dim must be non-negative")
        if len(self.one) != d:
            raise ValueError(f"one has {len(self.one)} entries, expected {d}")
        if len(self.mul) != d or any(len(row) != d for row in self.mul):
            raise ValueError(f"mul must be a {d} x {d} x {d} table")
        if any(len(cell) != d for row in self.mul for cell in row):
            raise ValueError(f"mul must be a {d} x {d} x {d} table")
        return self


class RingSpecFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    preset: str | None = None
    explicit: ExplicitTable | None = None
    labels: list[str] | None = None
    name: str | None = None

    @model_validator(mode="after")
    def check_source(self) -> RingSpecFile:
        if (self.preset is None) == (self.explicit is None):
            raise ValueError("give exactly one of 'preset' or 'explicit'")
        return self

    def build(self) -> FiniteAlgebra:
        """Validate into a FiniteAlgebra; build_algebra errors pass through."""
        if self.preset is not None:
            R = catalog(self.preset)
            if self.labels is None and self.name is None:
                return R
            return build_algebra(R.p, R.mul, R.one, self.labels or R.labels, self.name or R.name)
        table = self.explicit
        name = self.name or f"R(p={table.p},dim={table.dim})"
        return build_algebra(table.p, table.mul, table.one, self.labels, name)

    def describe(self) -> str:
        return self.preset if self.preset is not None else (self.name or "explicit")


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def _locate(text: str, loc: tuple[Any, ...]) -> tuple[int, int]:
    """Best-effort position of the innermost named key in ``loc``."""
    keys = [part for part in loc if isinstance(part, str)]
    for key in reversed(keys):
        found = re.search(rf'"{re.escape(key)}"\s*:', text)
        if found:
            return _position(text, found.start())
    return 1, 1


def parse_ring_spec(text: str) -> RingSpecFile:
    """Strict parse of ring-spec JSON.

    Raises:
        RingSpecSyntaxError: malformed JSON, unknown keys or a table of the wrong arity,
            with the 1-based line and column of the problem.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RingSpecSyntaxError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(raw, dict):
        raise RingSpecSyntaxError("ring spec must be a JSON object")
    try:
        return RingSpecFile.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "spec"
        line, column = _locate(text, tuple(first["loc"]))
        raise RingSpecSyntaxError(f"{where}: {first['msg']}", line, column) from exc


def ring_spec_for(ring: str) -> RingSpecFile:
    """``--ring`` accepts a preset name or inline JSON."""
    ring = ring.strip()
    if ring.startswith("{"):
        return parse_ring_spec(ring)
    return RingSpecFile(preset=ring)


def load_ring(
    ring: str | None = None, ring_file: Path | None = None
) -> tuple[FiniteAlgebra, RingSpecFile]:
    """Resolve ``--ring`` / ``--ring-file`` into an algebra and the spec it came from."""
    if (ring is None) == (ring_file is None):
        raise RingSpecSyntaxError("give exactly one of --ring or --ring-file")
    if ring_file is not None:
        try:
            text = ring_file.read_text()
        except OSError as exc:
            raise RingSpecSyntaxError(f"cannot read {ring_file}: {exc.strerror}") from exc
        spec = parse_ring_spec(text)
    else:
        spec = ring_spec_for(ring)
    return spec.build(), spec
