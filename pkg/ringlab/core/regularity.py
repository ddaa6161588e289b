"""Element classification: regular, unit-regular, nilpotent, strongly pi-regular.

Regularity is decided by linear algebra: ``axa = a`` is linear in x, so the set of
inner inverses is an affine subspace computed exactly. Unit-regularity has two
independent routes, a unit inside the inner-inverse set and an isomorphism
r(a) ~ R/aR, and both are always run so they can be compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel

from ringlab.core.algebra import CornerData, Element, FiniteAlgebra, corner_algebra
from ringlab.core.errors import VerificationFailure
from ringlab.core.exactla import AffineSolutionSet, Mat
from ringlab.core.modules import (
    BATCH,
    IsoSearch,
    ModuleMap,
    Submodule,
    Verdict,
    find_isomorphism,
    left_mult_image,
    quotient,
    regular_representation,
    right_annihilator,
)
from ringlab.utils.config import config
from ringlab.utils.helpers import balanced_ranges, chunk_ranges, resolve_jobs, run_chunks
from ringlab.utils.log import get_logger

log = get_logger(__name__)


# ---------------------------------------------------------------------------
# Units
# ---------------------------------------------------------------------------


def left_matrices(R: FiniteAlgebra, coords: Mat) -> np.ndarray:
    """Stack of left-multiplication matrices, one per coordinate row."""
    return np.einsum("ni,ijk->njk", coords, R.mul) % R.p


def units_among(R: FiniteAlgebra, coords: Mat) -> np.ndarray:
    """Mask of the rows of ``coords`` that are units (x is a unit iff r -> xr is bijective)."""
    return R.field.invertible_mask(left_matrices(R, coords))


def _unit_mask_chunk(R: FiniteAlgebra, bounds: tuple[int, int]) -> np.ndarray:
    start, stop = bounds
    return np.concatenate(
        [units_among(R, R.coords_block(lo, hi)) for lo, hi in _sub_ranges(start, stop)]
    )


def _sub_ranges(start: int, stop: int) -> list[tuple[int, int]]:
    return [(start + lo, start + hi) for lo, hi in chunk_ranges(stop - start, BATCH)]


def unit_mask(R: FiniteAlgebra, jobs: int | None = None) -> np.ndarray:
    """Boolean mask over element indices marking the units."""
    R.ensure_enumerable()
    ranges = balanced_ranges(R.order, resolve_jobs(jobs))
    parts = run_chunks(partial(_unit_mask_chunk, R), ranges, jobs)
    return np.concatenate(parts) if parts else np.zeros(0, dtype=bool)


def unit_count(R: FiniteAlgebra, jobs: int | None = None) -> int:
    return int(unit_mask(R, jobs).sum())


# ---------------------------------------------------------------------------
# Inner inverses and unit-regularity
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class InnerInverseSet:
    """{x : axa = a}; ``solutions`` is None when a is not regular."""

    a: Element
    solutions: AffineSolutionSet | None

    @property
    def is_regular(self) -> bool:
        return self.solutions is not None

    @property
    def size(self) -> int:
        return 0 if self.solutions is None else self.solutions.size

    def first(self) -> Element | None:
        """The solution with every free coordinate zero."""
        if self.solutions is None:
            return None
        return Element(self.a.algebra, self.solutions.particular)

    def contains(self, x: Element) -> bool:
        return self.solutions is not None and self.solutions.contains(x.coords)


def inner_inverse_set(a: Element) -> InnerInverseSet:
    """Solve axa = a; row j of the system matrix is a b_j a."""
    R = a.algebra
    system = a.left_matrix() @ a.right_matrix() % R.p
    return InnerInverseSet(a, R.field.solve_affine(system.T, a.coords))


def is_regular(a: Element) -> bool:
    return inner_inverse_set(a).is_regular


@dataclass(frozen=True, eq=False)
class UnitRegularCertificate:
    """A unit u with aua = a, optionally with an isomorphism r(a) -> R/aR."""

    a: Element
    u: Element
    iso_evidence: ModuleMap | None = None

    def verify(self) -> bool:
        a, u = self.a, self.u
        if not u.is_unit or a * u * a != a:
            return False
        iso = self.iso_evidence
        return iso is None or (iso.is_linear() and iso.is_bijective())


class UnitRegularity(NamedTuple):
    verdict: Verdict
    certificate: UnitRegularCertificate | None
    unit_route: Verdict
    iso_route: Verdict


def _first_unit(R: FiniteAlgebra, candidates: Mat) -> Element | None:
    hits = np.flatnonzero(units_among(R, candidates))
    return Element(R, candidates[hits[0]]) if hits.size else None


def unit_inner_inverse(inner: InnerInverseSet) -> tuple[Verdict, Element | None]:
    """Scan the inner-inverse set for a unit: exhaustively under the cap, else by sampling."""
    sols = inner.solutions
    if sols is None:
        return Verdict.FALSE, None
    R, field = inner.a.algebra, inner.a.algebra.field
    k = sols.kernel.dim
    total = field.p**k
    if total <= config.inner_inverse_cap:
        for start, stop in chunk_ranges(total, BATCH):
            xs = (sols.particular + field.digits(start, stop, k) @ sols.kernel.basis) % field.p
            u = _first_unit(R, xs)
            if u is not None:
                return Verdict.TRUE, u
        return Verdict.FALSE, None

    log.info("inner-inverse set of size %d^%d above cap, sampling", field.p, k)
    rng = np.random.default_rng(config.random_seed)
    remaining = config.random_trials
    while remaining > 0:
        batch = min(BATCH, remaining)
        coeffs = rng.integers(0, field.p, size=(batch, k), dtype=np.int64)
        u = _first_unit(R, (sols.particular + coeffs @ sols.kernel.basis) % field.p)
        if u is not None:
            return Verdict.TRUE, u
        remaining -= batch
    return Verdict.UNKNOWN, None


class AnnihilatorQuotient(NamedTuple):
    K: Submodule
    aR: Submodule
    projection: ModuleMap  # R_R -> R/aR
    search: IsoSearch


def annihilator_vs_quotient(a: Element) -> AnnihilatorQuotient:
    """Search for an isomorphism r(a) -> R/aR."""
    K = right_annihilator(a)
    aR = left_mult_image(a)
    Q = quotient(regular_representation(a.algebra), aR)
    return AnnihilatorQuotient(K, aR, Q.projection, find_isomorphism(K.as_module, Q.module))


def unit_from_isomorphism(
    a: Element, x: Element, K: Submodule, phi: ModuleMap, projection: ModuleMap
) -> Element:
    """u = xax + phi^-1([1]) for an inner inverse x and an isomorphism phi: r(a) -> R/aR.

    Left multiplication by u sends ar to xar on aR and maps the complement (1-ax)R
    of aR onto r(a) through phi^-1, so u is a unit and ua = xa, hence aua = a.
    """
    inv = phi.inverse()
    if inv is None:
        raise VerificationFailure("isomorphism r(a) -> R/aR is not invertible")
    R = a.algebra
    preimage = inv.apply(projection.apply(R.one)) @ K.basis % R.p
    return x * a * x + R.element(preimage)


def unit_regular_certificate(a: Element) -> UnitRegularity:
    """Decide unit-regularity by both routes; a certificate is attached when TRUE.

    The isomorphism route is gated on regularity: r(a) ~ R/aR can hold for
    elements that are not regular at all (1+g in F_2[C_2]).
    """
    inner = inner_inverse_set(a)
    if not inner.is_regular:
        return UnitRegularity(Verdict.FALSE, None, Verdict.FALSE, Verdict.FALSE)

    unit_route, u = unit_inner_inverse(inner)
    evidence = annihilator_vs_quotient(a)
    iso_route = evidence.search.verdict
    if u is None and evidence.search.iso is not None:
        u = unit_from_isomorphism(
            a, inner.first(), evidence.K, evidence.search.iso, evidence.projection
        )
    if Verdict.FALSE in (unit_route, iso_route) and Verdict.TRUE in (unit_route, iso_route):
        log.warning(
            "unit-regularity routes disagree for %s: unit %s, iso %s",
            a,
            unit_route.value,
            iso_route.value,
        )

    if u is None:
        both_false = unit_route is Verdict.FALSE and iso_route is Verdict.FALSE
        verdict = Verdict.FALSE if both_false else Verdict.UNKNOWN
        return UnitRegularity(verdict, None, unit_route, iso_route)
    certificate = UnitRegularCertificate(a, u, evidence.search.iso)
    if not certificate.verify():
        raise VerificationFailure(f"unit-regularity certificate for {a} does not verify")
    return UnitRegularity(Verdict.TRUE, certificate, unit_route, iso_route)


# ---------------------------------------------------------------------------
# Powers
# ---------------------------------------------------------------------------


class NilpotencyData(NamedTuple):
    index: int | None  # least n >= 1 with a^n = 0
    cycle: tuple[int, int]  # first (i, j), i < j, with a^i = a^j


def nilpotency_data(a: Element) -> NilpotencyData:
    seen: dict[bytes, int] = {}
    index = None
    x, n = a.algebra.identity(), 0
    while True:
        if n >= 1 and index is None and x.is_zero:
            index = n
        key = x.coords.tobytes()
        if key in seen:
            return NilpotencyData(index, (seen[key], n))
        seen[key] = n
        x, n = x * a, n + 1


def pi_chain_dims(a: Element) -> list[tuple[int, int]]:
    """(dim a^nR, dim Ra^n) for n = 0, 1, ... up to the first repeat."""
    rank = a.algebra.field.rank
    x = a.algebra.identity()
    dims = [(rank(x.left_matrix()), rank(x.right_matrix()))]
    while True:
        x = x * a
        dims.append((rank(x.left_matrix()), rank(x.right_matrix())))
        if dims[-1] == dims[-2]:
            return dims


def strongly_pi_regular_index(a: Element) -> int:
    """Least n with a^nR = a^(n+1)R and Ra^n = Ra^(n+1).

    Both chains descend, so equal dimensions mean equal ideals.
    """
    return len(pi_chain_dims(a)) - 2


class PowersCheck(NamedTuple):
    regular: bool
    failing_exponent: int | None
    checked_up_to: int


def all_powers_regular(a: Element) -> PowersCheck:
    """Check a^1..a^j where a^j closes the power cycle; that covers every power."""
    top = max(nilpotency_data(a).cycle[1], 1)
    x = a
    for n in range(1, top + 1):
        if not is_regular(x):
            return PowersCheck(False, n, top)
        x = x * a
    return PowersCheck(True, None, top)


# ---------------------------------------------------------------------------
# Idempotent power splitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SplitData:
    """a = ea + (1-e)a with e = a^m idempotent, ea a unit of eRe and (1-e)a nilpotent."""

    a: Element
    m: int
    e: Element
    unit_corner: CornerData
    nil_corner: CornerData
    unit_part: Element  # ea in eRe coordinates
    nil_part: Element  # (1-e)a in (1-e)R(1-e) coordinates
    unit_inverse: Element | None
    nil_index: int | None

    def checks(self) -> dict[str, bool]:
        a, e = self.a, self.e
        whole = self.unit_corner.from_corner(self.unit_part) + self.nil_corner.from_corner(
            self.nil_part
        )
        return {
            "e idempotent": e.is_idempotent,
            "ae = ea": a * e == e * a,
            "unit part invertible in eRe": self.unit_inverse is not None,
            "nilpotent part nilpotent in (1-e)R(1-e)": self.nil_index is not None,
            "a = ea + (1-e)a": whole == a,
        }

    def failed_checks(self) -> list[str]:
        return [name for name, held in self.checks().items() if not held]


def idempotent_power_split(a: Element) -> SplitData:
    """Take the least m >= 1 with a^m idempotent and split a along e = a^m."""
    x, m = a, 1
    while not x.is_idempotent:
        x, m = x * a, m + 1
    e = x
    f = 1 - e
    unit_corner, nil_corner = corner_algebra(e), corner_algebra(f)
    unit_part = unit_corner.to_corner(e * a)
    nil_part = nil_corner.to_corner(f * a)
    split = SplitData(
        a=a,
        m=m,
        e=e,
        unit_corner=unit_corner,
        nil_corner=nil_corner,
        unit_part=unit_part,
        nil_part=nil_part,
        unit_inverse=unit_part.try_inverse(),
        nil_index=nilpotency_data(nil_part).index,
    )
    failed = split.failed_checks()
    if failed:
        raise VerificationFailure(f"split of {a} fails: {', '.join(failed)}")
    log.debug("split %s: m=%d, e=%s", a, m, e)
    return split


# ---------------------------------------------------------------------------
# Exhaustive classification
# ---------------------------------------------------------------------------


class ElementProfile(BaseModel):
    """One row of a classification report."""

    index: int
    element: str
    coords: list[int]
    is_unit: bool
    is_idempotent: bool
    nilpotency_index: int | None = None
    is_regular: bool
    unit_regular: Verdict
    unit_route: Verdict
    iso_route: Verdict
    spr_index: int
    dim_aR: int
    dim_annihilator: int

    @property
    def is_nilpotent(self) -> bool:
        return self.nilpotency_index is not None

    def inconsistencies(self, dim: int) -> list[str]:
        """Flag combinations that cannot happen."""
        found = []
        if self.is_unit and not self.is_regular:
            found.append("unit but not regular")
        if self.is_unit and self.unit_regular is not Verdict.TRUE:
            found.append("unit but not unit-regular")
        if self.unit_regular is Verdict.TRUE and not self.is_regular:
            found.append("unit-regular but not regular")
        if self.is_idempotent and not self.is_regular:
            found.append("idempotent but not regular")
        if self.is_unit and self.is_nilpotent and dim > 0:
            found.append("unit and nilpotent")
        if self.dim_aR + self.dim_annihilator != dim:
            found.append("dim aR + dim r(a) != dim R")
        return found


def profile_element(a: Element, index: int) -> ElementProfile:
    rank = a.algebra.field.rank
    dim_aR = rank(a.left_matrix())
    verdicts = unit_regular_certificate(a)
    return ElementProfile(
        index=index,
        element=str(a),
        coords=a.coords.tolist(),
        is_unit=a.is_unit,
        is_idempotent=a.is_idempotent,
        nilpotency_index=nilpotency_data(a).index,
        is_regular=is_regular(a),
        unit_regular=verdicts.verdict,
        unit_route=verdicts.unit_route,
        iso_route=verdicts.iso_route,
        spr_index=strongly_pi_regular_index(a),
        dim_aR=dim_aR,
        dim_annihilator=a.algebra.dim - dim_aR,
    )


def _classify_chunk(R: FiniteAlgebra, bounds: tuple[int, int]) -> list[ElementProfile]:
    start, stop = bounds
    return [
        profile_element(Element(R, row), start + offset)
        for offset, row in enumerate(R.coords_block(start, stop))
    ]


def classify_all(R: FiniteAlgebra, jobs: int | None = None) -> list[ElementProfile]:
    """Profile every element, in index order, then re-check flag consistency."""
    R.ensure_enumerable()
    ranges = balanced_ranges(R.order, resolve_jobs(jobs))
    chunks = run_chunks(partial(_classify_chunk, R), ranges, jobs)
    profiles = [profile for chunk in chunks for profile in chunk]
    for profile in profiles:
        bad = profile.inconsistencies(R.dim)
        if bad:
            raise VerificationFailure(f"{profile.element}: {', '.join(bad)}")
    return profiles


class ClassificationSummary(BaseModel):
    elements: int = 0
    units: int = 0
    idempotents: int = 0
    nilpotents: int = 0
    regular: int = 0
    unit_regular: int = 0
    unknown: int = 0
    route_disagreements: int = 0

    @classmethod
    def from_profiles(cls, profiles: list[ElementProfile]) -> ClassificationSummary:
        conflict = {Verdict.TRUE, Verdict.FALSE}
        return cls(
            elements=len(profiles),
            units=sum(p.is_unit for p in profiles),
            idempotents=sum(p.is_idempotent for p in profiles),
            nilpotents=sum(p.is_nilpotent for p in profiles),
            regular=sum(p.is_regular for p in profiles),
            unit_regular=sum(p.unit_regular is Verdict.TRUE for p in profiles),
            unknown=sum(p.unit_regular is Verdict.UNKNOWN for p in profiles),
            route_disagreements=sum(
                p.is_regular and {p.unit_route, p.iso_route} == conflict for p in profiles
            ),
        )


# ---------------------------------------------------------------------------
# Stable range one
# ---------------------------------------------------------------------------


class StableRangeReport(BaseModel):
    """Outcome of the exhaustive check that aR + bR = R implies a + by is a unit."""

    ring: str
    holds: bool
    elements: int
    pairs_checked: int
    witnessed_pairs: int
    counterexample: list[str] | None = None
    counterexample_coords: list[list[int]] | None = None
    fault_injected: bool = False


class _PairTally(NamedTuple):
    pairs: int
    witnessed: int
    counterexample: tuple[int, int] | None  # (a index, b index)


def _sr1_chunk(R: FiniteAlgebra, mask: np.ndarray, bounds: tuple[int, int]) -> _PairTally:
    """Check every pair (a, b) with b in ``bounds``; stop at the first counterexample."""
    p, d, order = R.p, R.dim, R.order
    everything = R.coords_block(0, order)
    powers = p ** np.arange(d - 1, -1, -1, dtype=np.int64)
    a_block = max(1, (1 << 22) // max(order * max(d, 1), 1))
    pairs = witnessed = 0
    for b_index in range(*bounds):
        b = everything[b_index]
        left_b = R.left_matrix(b)
        products = everything @ left_b % p  # row y is b*y
        for lo, hi in chunk_ranges(order, a_block):
            sums = (everything[lo:hi, None, :] + products[None, :, :]) % p
            found = mask[sums @ powers].any(axis=1)
            pairs += hi - lo
            witnessed += int(found.sum())
            for offset in np.flatnonzero(~found):
                a_index = lo + int(offset)
                stacked = np.vstack([R.left_matrix(everything[a_index]), left_b])
                if R.field.rank(stacked) == d:
                    return _PairTally(pairs, witnessed, (a_index, b_index))
    return _PairTally(pairs, witnessed, None)


def stable_range_one(
    R: FiniteAlgebra, jobs: int | None = None, units: np.ndarray | None = None
) -> StableRangeReport:
    """Exhaustive stable-range-one check.

    ``units`` overrides the unit mask; passing a mask with units removed forces
    the counterexample path to run.
    """
    R.ensure_enumerable()
    mask = unit_mask(R, jobs) if units is None else np.asarray(units, dtype=bool)
    tallies = run_chunks(
        partial(_sr1_chunk, R, mask), balanced_ranges(R.order, resolve_jobs(jobs), minimum=8), jobs
    )
    counterexample = next((t.counterexample for t in tallies if t.counterexample), None)
    report = StableRangeReport(
        ring=R.name,
        holds=counterexample is None,
        elements=R.order,
        pairs_checked=sum(t.pairs for t in tallies),
        witnessed_pairs=sum(t.witnessed for t in tallies),
        fault_injected=units is not None,
    )
    if counterexample is not None:
        a, b = (R.element_at(i) for i in counterexample)
        report.counterexample = [str(a), str(b)]
        report.counterexample_coords = [a.coords.tolist(), b.coords.tolist()]
        log.warning("stable range one fails on %s at a=%s, b=%s", R.name, a, b)
    return report
