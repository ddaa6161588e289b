"""Report records written by every command, and re-verification of saved chain reports.

Subspaces are stored as their RREF integer rows, so a report is enough on its own
to rebuild a chain and check it again.
"""

from __future__ import annotations

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ringlab import __version__
from ringlab.core.algebra import Element, FiniteAlgebra, power
from ringlab.core.errors import (
    DimensionMismatch,
    ReportFormatError,
    RingLabError,
    VerificationFailure,
)
from ringlab.core.modules import (
    ModuleMap,
    Submodule,
    left_mult_image,
    quotient,
    regular_representation,
    right_annihilator,
)
from ringlab.core.regularity import unit_from_isomorphism
from ringlab.core.theorems import (
    ChainLevel,
    ChainVariant,
    CheckResult,
    TheoremChain,
    UnitWitness,
    build_chain,
    unit_witness,
    verify_chain,
)
from ringlab.data.ringspec import RingSpecFile
from ringlab.utils.helpers import stopwatch

REPORT_SCHEMA = 1

Rows = list[list[int]]


class RingFingerprint(BaseModel):
    name: str
    p: int
    dim: int
    hash: str

    @classmethod
    def of(cls, R: FiniteAlgebra) -> RingFingerprint:
        return cls(name=R.name, p=R.p, dim=R.dim, hash=R.fingerprint)


class ErrorInfo(BaseModel):
    code: str
    message: str

    @classmethod
    def from_error(cls, exc: RingLabError) -> ErrorInfo:
        return cls(code=exc.code, message=exc.message)


class Report(BaseModel):
    """The one JSON document a command writes to standard output."""

    model_config = ConfigDict(extra="forbid")

    schema_version: int = REPORT_SCHEMA
    tool: str = "ringlab"
    version: str = __version__
    command: str
    arguments: dict[str, Any] = Field(default_factory=dict)
    ring: RingFingerprint | None = None
    ring_spec: RingSpecFile | None = None
    result: dict[str, Any] = Field(default_factory=dict)
    verification: list[CheckResult] = Field(default_factory=list)
    error: ErrorInfo | None = None
    timing: dict[str, float] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.error is None and all(check.passed for check in self.verification)

    @property
    def failed_checks(self) -> list[CheckResult]:
        return [check for check in self.verification if not check.passed]

    def to_json(self, timing: bool = True) -> str:
        """Indented JSON; ``timing=False`` drops the only field that varies between runs."""
        return self.model_dump_json(indent=2, exclude=None if timing else {"timing"})

    @classmethod
    def from_json(cls, text: str) -> Report:
        try:
            return cls.model_validate_json(text)
        except ValidationError as exc:
            first = exc.errors()[0]
            where = ".".join(str(part) for part in first["loc"]) or "report"
            raise ReportFormatError(f"{where}: {first['msg']}") from exc


# ---------------------------------------------------------------------------
# Chain payloads
# ---------------------------------------------------------------------------


def rows(S: Submodule) -> Rows:
    return S.basis.tolist()


class LevelRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    j: int
    A: Rows
    A_prime: Rows
    Y: Rows
    Y_prime: Rows | None = None
    E: Rows
    iso: Rows  # E_j -> R/aR in E_j and quotient coordinates


class WitnessRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    u: str
    u_coords: list[int]
    u_inverse_coords: list[int]
    x_coords: list[int]
    iso: Rows  # K -> R/aR
    inner_inverse_check: bool
    in_inner_inverse_set: bool


class ChainRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    theorem: int
    variant: ChainVariant
    element: str
    element_coords: list[int]
    K: Rows
    aR: Rows
    quotient_dim: int
    levels: list[LevelRecord]
    X: Rows
    E: Rows
    Y: Rows
    dims: dict[str, list[int]]
    witness: WitnessRecord | None = None


def chain_record(chain: TheoremChain, witness: UnitWitness | None = None) -> ChainRecord:
    a = chain.a
    levels = [
        LevelRecord(
            j=level.j,
            A=rows(level.A),
            A_prime=rows(level.A_prime),
            Y=rows(level.Y),
            Y_prime=rows(level.Y_prime) if level.Y_prime is not None else None,
            E=rows(level.E),
            iso=np.asarray(level.iso.matrix).tolist(),
        )
        for level in chain.levels
    ]
    record = ChainRecord(
        theorem=chain.variant.theorem,
        variant=chain.variant,
        element=str(a),
        element_coords=a.coords.tolist(),
        K=rows(chain.K),
        aR=rows(left_mult_image(a)),
        quotient_dim=chain.quotient.module.dim,
        levels=levels,
        X=rows(chain.X()),
        E=rows(chain.E),
        Y=rows(chain.Y),
        dims={
            "A": [level.A.dim for level in chain.levels],
            "A_prime": [level.A_prime.dim for level in chain.levels],
            "Y": [level.Y.dim for level in chain.levels],
            "E": [level.E.dim for level in chain.levels],
        },
    )
    if witness is not None:
        inverse = witness.u.try_inverse()
        record.witness = WitnessRecord(
            u=str(witness.u),
            u_coords=witness.u.coords.tolist(),
            u_inverse_coords=inverse.coords.tolist() if inverse is not None else [],
            x_coords=witness.x.coords.tolist(),
            iso=np.asarray(witness.iso_used.matrix).tolist(),
            inner_inverse_check=witness.inner_inverse_check,
            in_inner_inverse_set=witness.in_inner_inverse_set,
        )
    return record


def _matrix(R: FiniteAlgebra, basis: Rows) -> np.ndarray:
    if any(len(row) != R.dim for row in basis):
        raise VerificationFailure(f"stored basis rows must have length {R.dim}")
    return np.asarray(basis, dtype=np.int64).reshape(len(basis), R.dim)


def _submodule(R: FiniteAlgebra, basis: Rows) -> Submodule:
    RR = regular_representation(R)
    return Submodule(RR, R.field.span(_matrix(R, basis), R.dim))


def _is_canonical(R: FiniteAlgebra, basis: Rows) -> bool:
    """The stored rows are exactly the RREF basis of their own span."""
    try:
        stored = _matrix(R, basis)
    except VerificationFailure:
        return False
    return np.array_equal(stored, R.field.span(stored, R.dim).basis)


def stored_bases(record: ChainRecord) -> list[tuple[str, Rows]]:
    """Every subspace basis a chain record carries, with a display name."""
    bases = [("K", record.K), ("aR", record.aR), ("X_n", record.X)]
    bases += [("E_n", record.E), ("Y_n", record.Y)]
    for level in record.levels:
        tag = f"level {level.j}"
        bases += [(f"{tag}: A_j", level.A), (f"{tag}: A_j'", level.A_prime)]
        bases += [(f"{tag}: Y_j", level.Y), (f"{tag}: E_j", level.E)]
        if level.Y_prime is not None:
            bases.append((f"{tag}: Y_j'", level.Y_prime))
    return bases


def canonical_checks(R: FiniteAlgebra, record: ChainRecord) -> list[CheckResult]:
    return [
        CheckResult(name=f"{name} stored in canonical form", passed=_is_canonical(R, basis))
        for name, basis in stored_bases(record)
    ]


def summary_checks(chain: TheoremChain, record: ChainRecord) -> list[CheckResult]:
    """The top-level aR, X, E and Y rows agree with what the stored levels give."""
    if not chain.levels:
        return []
    expected = {
        "aR": (record.aR, left_mult_image(chain.a)),
        "X_n": (record.X, chain.X()),
        "E_n": (record.E, chain.E),
        "Y_n": (record.Y, chain.Y),
    }
    return [
        CheckResult(name=f"stored {name} matches the levels", passed=stored == rows(S))
        for name, (stored, S) in expected.items()
    ]


def chain_from_record(R: FiniteAlgebra, record: ChainRecord) -> TheoremChain:
    """Rebuild a chain from stored bases and maps; nothing is recomputed but a, r(a) and R/aR."""
    a = R.element(record.element_coords)
    Q = quotient(regular_representation(R), left_mult_image(a))
    levels = []
    for level in record.levels:
        E = _submodule(R, level.E)
        try:
            iso = ModuleMap(E.as_module, Q.module, np.asarray(level.iso, dtype=np.int64))
        except DimensionMismatch as exc:
            raise VerificationFailure(f"level {level.j}: stored map has the wrong shape") from exc
        levels.append(
            ChainLevel(
                j=level.j,
                A=_submodule(R, level.A),
                A_prime=_submodule(R, level.A_prime),
                Y=_submodule(R, level.Y),
                Y_prime=_submodule(R, level.Y_prime) if level.Y_prime is not None else None,
                E=E,
                iso=iso,
            )
        )
    return TheoremChain(a, record.variant, _submodule(R, record.K), Q, tuple(levels))


def witness_checks(a: Element, record: WitnessRecord) -> list[CheckResult]:
    """Check a stored unit witness from its coordinates and stored map alone."""
    R = a.algebra
    u = R.element(record.u_coords)
    x = R.element(record.x_coords)
    results = [
        CheckResult(name="witness: u is a unit", passed=u.is_unit),
        CheckResult(name="witness: aua = a", passed=a * u * a == a),
        CheckResult(name="witness: axa = a for the stored x", passed=a * x * a == a),
    ]
    if len(record.u_inverse_coords) == R.dim:
        inverse = R.element(record.u_inverse_coords)
        both = u * inverse == R.identity() and inverse * u == R.identity()
        results.append(CheckResult(name="witness: stored inverse inverts u", passed=both))
    else:
        results.append(CheckResult(name="witness: stored inverse inverts u", passed=False))

    K = right_annihilator(a)
    Q = quotient(regular_representation(R), left_mult_image(a))
    try:
        phi = ModuleMap(K.as_module, Q.module, np.asarray(record.iso, dtype=np.int64))
        iso_ok = phi.is_linear() and phi.is_bijective()
        rebuilt = unit_from_isomorphism(a, x, K, phi, Q.projection) == u if iso_ok else False
    except RingLabError as exc:
        return [*results, CheckResult(name="witness: stored map", passed=False, detail=exc.message)]
    results.append(
        CheckResult(name="witness: stored map r(a) -> R/aR is an isomorphism", passed=iso_ok)
    )
    results.append(
        CheckResult(name="witness: u = xax + phi^-1([1]) from the stored map", passed=rebuilt)
    )
    return results


def verify_report(report: Report) -> list[CheckResult]:
    """Re-verify a saved ``chain`` report from its own contents.

    Raises:
        ReportFormatError: the report is not a chain report or its payload is malformed.
    """
    if report.command != "chain" or "chain" not in report.result:
        raise ReportFormatError(f"'{report.command}' reports carry no chain to verify")
    if report.ring_spec is None or report.ring is None:
        raise ReportFormatError("report has no ring spec")
    try:
        record = ChainRecord.model_validate(report.result["chain"])
    except ValidationError as exc:
        raise ReportFormatError(f"malformed chain payload: {exc.errors()[0]['msg']}") from exc

    R = report.ring_spec.build()
    results = [
        CheckResult(
            name="ring fingerprint matches",
            passed=R.fingerprint == report.ring.hash,
            detail=f"{R.fingerprint} vs {report.ring.hash}",
        )
    ]
    results.extend(canonical_checks(R, record))
    a = R.element(record.element_coords)
    try:
        chain = chain_from_record(R, record)
    except RingLabError as exc:
        return [*results, CheckResult(name="chain reload", passed=False, detail=exc.message)]
    results.extend(summary_checks(chain, record))
    results.extend(verify_chain(a, chain))
    if record.witness is not None:
        results.extend(witness_checks(a, record.witness))
    return results


# ---------------------------------------------------------------------------
# Command payloads
# ---------------------------------------------------------------------------


def chain_report(
    spec: RingSpecFile,
    R: FiniteAlgebra,
    a: Element,
    theorem: int,
    levels: int | None = None,
    element_text: str | None = None,
) -> Report:
    """Build a chain, its unit witness when a^n = 0, and re-verify both from the record."""
    report = Report(
        command="chain",
        arguments={"element": element_text or str(a), "theorem": theorem, "levels": levels},
        ring=RingFingerprint.of(R),
        ring_spec=spec,
    )
    with stopwatch() as timing:
        try:
            chain = build_chain(a, theorem, levels)
            witness = unit_witness(a, chain) if power(a, chain.n).is_zero else None
            report.result["chain"] = chain_record(chain, witness).model_dump(mode="json")
            report.result["nilpotent_at_level"] = witness is not None
            report.verification = verify_report(report)
        except RingLabError as exc:
            report.error = ErrorInfo.from_error(exc)
    report.timing = dict(timing)
    return report
