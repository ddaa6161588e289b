"""The self-test suite behind ``ringlab selftest``.

Each check runs a brute-force oracle or a full construction on catalog rings and
reports a named pass/fail with the failures it collected. ``quick`` lowers the ring
size limits so the suite finishes in seconds.
"""

from __future__ import annotations

from collections.abc import Callable
from functools import partial
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, Field

from ringlab.core.algebra import Element, FiniteAlgebra
from ringlab.core.catalog import (
    catalog,
    gl_order,
    jordan_block,
    nilpotent_matrix_count,
    parse_element,
)
from ringlab.core.errors import NotRegular, PowersNotRegular, RingLabError
from ringlab.core.modules import (
    Submodule,
    Verdict,
    complement,
    find_isomorphism,
    is_decomposition,
    left_mult_image,
    lemma3_split,
    regular_representation,
)
from ringlab.core.regularity import (
    ClassificationSummary,
    all_powers_regular,
    classify_all,
    idempotent_power_split,
    is_regular,
    nilpotency_data,
    stable_range_one,
)
from ringlab.core.theorems import theorem2_chain, theorem4_chain, unit_witness, verify_chain
from ringlab.data.reports import chain_report
from ringlab.data.ringspec import RingSpecFile
from ringlab.utils.config import config
from ringlab.utils.helpers import balanced_ranges, resolve_jobs, run_chunks, stopwatch
from ringlab.utils.log import get_logger

log = get_logger(__name__)

MAX_LISTED_FAILURES = 20


class SuiteResult(BaseModel):
    """Outcome of one self-test check."""

    number: int
    name: str
    passed: bool
    detail: str = ""
    failures: list[str] = Field(default_factory=list)
    seconds: float = 0.0


class Outcome(NamedTuple):
    detail: str
    failures: list[str]


class Limits(NamedTuple):
    sweep: int  # theorem sweep and oracle equivalence
    small: int  # stable range one and split suite
    lemma3_trials: int


FULL = Limits(sweep=4096, small=512, lemma3_trials=0)
QUICK = Limits(sweep=128, small=128, lemma3_trials=100)


def catalog_rings(limit: int) -> list[FiniteAlgebra]:
    """Catalog presets with at most ``limit`` elements."""
    rings = [catalog(name) for name in config.catalog_presets]
    return [R for R in rings if R.order <= limit]


def _failed(name: str, exc: RingLabError) -> str:
    return f"{name}: {exc.code}: {exc.message}"


# ---------------------------------------------------------------------------
# Individual checks
# ---------------------------------------------------------------------------


def check_classification(limits: Limits, jobs: int) -> Outcome:
    R = catalog("M(2,2)")
    summary = ClassificationSummary.from_profiles(classify_all(R, jobs))
    expected = {
        "elements": 16,
        "units": gl_order(2, 2),
        "nilpotents": nilpotent_matrix_count(2, 2),
        "regular": 16,
        "unit_regular": 16,
    }
    got = summary.model_dump(include=set(expected))
    failures = [
        f"{key}: expected {value}, got {got[key]}"
        for key, value in expected.items()
        if got[key] != value
    ]
    return Outcome(f"M(2,2): {got}", failures)


def _end_to_end(theorem: int) -> Outcome:
    R = catalog("M(3,2)")
    J = jordan_block(R)
    build = theorem4_chain if theorem == 4 else theorem2_chain
    failures: list[str] = []
    try:
        chain = build(J, 3)
        failures += [c.name for c in verify_chain(J, chain) if not c.passed]
        dims = {"K": chain.K.dim, "E_3": chain.E.dim, "R/JR": chain.quotient.module.dim}
        if not chain.Y.is_zero:
            failures.append("Y_3 != 0")
        if set(dims.values()) != {3}:
            failures.append(f"dimensions {dims}")
        witness = unit_witness(J, chain)
        if not witness.verify():
            failures.append(f"unit witness {witness.u} does not verify")
        detail = f"{dims}, u = {witness.u}"
    except RingLabError as exc:
        failures.append(_failed("M(3,2) J", exc))
        detail = "construction failed"
    return Outcome(detail, failures)


def check_theorem4_end_to_end(limits: Limits, jobs: int) -> Outcome:
    return _end_to_end(4)


def check_theorem2_end_to_end(limits: Limits, jobs: int) -> Outcome:
    return _end_to_end(2)


def _sweep_chunk(R: FiniteAlgebra, bounds: tuple[int, int]) -> tuple[int, list[str]]:
    """Build both chains for every nilpotent with regular powers and compare their E_n."""
    start, stop = bounds
    tried, failures = 0, []
    for row in R.coords_block(start, stop):
        a = Element(R, row)
        index = nilpotency_data(a).index
        if index is None or not all_powers_regular(a).regular:
            continue
        tried += 1
        try:
            chains = [theorem4_chain(a, max(index, 1)), theorem2_chain(a, max(index, 1))]
            for chain in chains:
                if not unit_witness(a, chain).verify():
                    failures.append(f"{R.name} {a}: {chain.variant.value} witness does not verify")
            found = find_isomorphism(chains[0].E.as_module, chains[1].E.as_module)
            if found.verdict is not Verdict.TRUE:
                failures.append(f"{R.name} {a}: final E of the two routes {found.verdict.value}")
        except RingLabError as exc:
            failures.append(_failed(f"{R.name} {a}", exc))
    return tried, failures


def check_theorem_sweep(limits: Limits, jobs: int) -> Outcome:
    tried, failures, names = 0, [], []
    for R in catalog_rings(limits.sweep):
        ranges = balanced_ranges(R.order, jobs, minimum=16)
        for count, bad in run_chunks(partial(_sweep_chunk, R), ranges, jobs):
            tried += count
            failures += bad
        names.append(R.name)
    return Outcome(f"{tried} nilpotent elements, both routes, over {', '.join(names)}", failures)


def check_stable_range_one(limits: Limits, jobs: int) -> Outcome:
    failures, names = [], []
    for R in catalog_rings(limits.small):
        report = stable_range_one(R, jobs)
        names.append(R.name)
        if not report.holds:
            failures.append(f"{R.name}: counterexample {report.counterexample}")

    # with no units allowed the counterexample path must fire
    R = catalog("FpC(2,2)")
    faulty = stable_range_one(R, jobs, units=np.zeros(R.order, dtype=bool))
    if faulty.holds or faulty.counterexample is None:
        failures.append("fault harness did not report a counterexample")
    return Outcome(f"holds on {', '.join(names)}; fault harness {faulty.counterexample}", failures)


def check_oracle_equivalence(limits: Limits, jobs: int) -> Outcome:
    failures, total = [], 0
    for R in catalog_rings(limits.sweep):
        summary = ClassificationSummary.from_profiles(classify_all(R, jobs))
        total += summary.elements
        if summary.route_disagreements:
            failures.append(f"{R.name}: {summary.route_disagreements} disagreements")
        if summary.unknown:
            failures.append(f"{R.name}: {summary.unknown} undecided elements")
    return Outcome(f"{total} elements compared", failures)


class Lemma3Instance(NamedTuple):
    A: Submodule
    B: Submodule


def _idempotent_power(a: Element) -> Element:
    x = a
    while not x.is_idempotent:
        x = x * a
    return x


def random_lemma3_instance(R: FiniteAlgebra, rng: np.random.Generator) -> Lemma3Instance:
    """A = eR for a random idempotent e, and B = (C0 twisted into A) + yR with C0 a complement of A.

    B maps onto C0 along A, so A + B = R.
    """
    RR = regular_representation(R)
    field = R.field
    e = _idempotent_power(R.element(field.random_matrix(rng, 1, R.dim)[0]))
    A = left_mult_image(e)
    C0 = complement(RR, A)
    twist = field.random_matrix(rng, C0.dim, A.dim) @ A.basis
    y = field.random_matrix(rng, 1, R.dim)
    B = RR.generated(np.vstack([(C0.basis + twist) % R.p, y]))
    return Lemma3Instance(A, B)


def check_lemma3_suite(limits: Limits, jobs: int) -> Outcome:
    trials = limits.lemma3_trials or config.lemma3_trials
    rng = np.random.default_rng(config.random_seed)
    rings = catalog_rings(512)
    failures = []
    for trial in range(trials):
        R = rings[trial % len(rings)]
        instance = random_lemma3_instance(R, rng)
        try:
            split = lemma3_split(regular_representation(R), instance.A, instance.B)
        except RingLabError as exc:
            failures.append(_failed(f"trial {trial} on {R.name}", exc))
            continue
        if not is_decomposition([instance.A, split.C]):
            failures.append(f"trial {trial} on {R.name}: P != A + C")
        if not is_decomposition([split.C, split.D], instance.B):
            failures.append(f"trial {trial} on {R.name}: B != C + D")
    return Outcome(f"{trials} random instances", failures)


def _split_chunk(R: FiniteAlgebra, bounds: tuple[int, int]) -> list[str]:
    failures = []
    for row in R.coords_block(*bounds):
        a = Element(R, row)
        try:
            idempotent_power_split(a)
        except RingLabError as exc:
            failures.append(_failed(f"{R.name} {a}", exc))
    return failures


def check_split_suite(limits: Limits, jobs: int) -> Outcome:
    failures, total = [], 0
    for R in catalog_rings(limits.small):
        total += R.order
        for bad in run_chunks(partial(_split_chunk, R), balanced_ranges(R.order, jobs), jobs):
            failures += bad
    return Outcome(f"{total} elements split", failures)


def _rejects(a: Element, label: str) -> list[str]:
    failures = []
    if is_regular(a):
        failures.append(f"{label} reported regular")
    for build, expected in ((theorem2_chain, NotRegular), (theorem4_chain, PowersNotRegular)):
        try:
            build(a, 1)
            failures.append(f"{build.__name__} accepted {label}")
        except expected as exc:
            if isinstance(exc, PowersNotRegular) and exc.exponent != 1:
                failures.append(f"{label}: first failing exponent {exc.exponent}, expected 1")
        except RingLabError as exc:
            failures.append(_failed(f"{build.__name__} on {label}", exc))
    return failures


def check_negative_controls(limits: Limits, jobs: int) -> Outcome:
    T = catalog("T(2,2)")
    F = catalog("FpC(2,2)")
    b = parse_element(F, "1+g")
    failures = _rejects(parse_element(T, "e12"), "e12 in T(2,2)")
    if nilpotency_data(b).index != 2:
        failures.append("1+g in FpC(2,2) is not nilpotent of index 2")
    failures += _rejects(b, "1+g in FpC(2,2)")
    return Outcome("e12 in T(2,2), 1+g in FpC(2,2)", failures)


def check_determinism(limits: Limits, jobs: int) -> Outcome:
    spec = RingSpecFile(preset="M(3,2)")
    R = spec.build()
    failures = []
    for theorem in (4, 2):
        first, second = (
            chain_report(spec, R, jordan_block(R), theorem, 3, "J").to_json(timing=False)
            for _ in range(2)
        )
        if first != second:
            failures.append(f"theorem {theorem} reports differ between runs")
    return Outcome("M(3,2) J, both routes, two runs each", failures)


CHECKS: list[tuple[str, Callable[[Limits, int], Outcome]]] = [
    ("classification oracle on M(2,2)", check_classification),
    ("regular-powers chain for J in M(3,2)", check_theorem4_end_to_end),
    ("exchange chain for J in M(3,2)", check_theorem2_end_to_end),
    ("theorem sweep over catalog nilpotents", check_theorem_sweep),
    ("stable range one", check_stable_range_one),
    ("unit-regularity oracle equivalence", check_oracle_equivalence),
    ("splitting lemma property suite", check_lemma3_suite),
    ("idempotent power split suite", check_split_suite),
    ("negative controls", check_negative_controls),
    ("deterministic chain reports", check_determinism),
]


def run_selftest(
    jobs: int | None = None, quick: bool = False, only: list[int] | None = None
) -> list[SuiteResult]:
    """Run the checks (1-based numbers in ``only``, default all) in order."""
    limits = QUICK if quick else FULL
    workers = resolve_jobs(jobs)
    results = []
    for number, (name, fn) in enumerate(CHECKS, start=1):
        if only and number not in only:
            continue
        log.info("selftest %d: %s", number, name)
        with stopwatch() as timing:
            try:
                outcome = fn(limits, workers)
            except RingLabError as exc:
                outcome = Outcome("raised", [_failed(name, exc)])
        results.append(
            SuiteResult(
                number=number,
                name=name,
                passed=not outcome.failures,
                detail=outcome.detail,
                failures=outcome.failures[:MAX_LISTED_FAILURES],
                seconds=timing["seconds"],
            )
        )
    return results
