"""Decomposition chains for regular elements and the unit-regularity witness.

Both builders produce right ideals A_j, A_j', Y_j of R with, for every level j,

    R = K + (A_1 + ... + A_j) + Y_j = (A_1 + ... + A_j) + E_j + aY_j     (direct sums)

where K = r(a), Y_j lies in a^jR, E_j = A_j' + aA_j is isomorphic to R/aR and
E_j = A_{j+1} + A_{j+1}'. The exchange route gets each level from the exchange
step with K as the exchanged module; the regular-powers route uses only the
projective splitting lemma and additionally has K + Y_j = K + a^jR.

Each level carries an explicit isomorphism E_j -> R/aR, composed from the one
below it. Once a^n = 0 we have Y_n = 0, so K and E_n are both complements of
X_n and the composite K -> E_n -> R/aR yields a unit u with aua = a.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel

from ringlab.core.algebra import Element, power
from ringlab.core.errors import (
    NotNilpotentAtThisLevel,
    NotRegular,
    PowersNotRegular,
    PreconditionViolated,
    RingLabError,
    VerificationFailure,
)
from ringlab.core.exactla import Mat
from ringlab.core.modules import (
    ModuleMap,
    Quotient,
    RightModule,
    Submodule,
    Verdict,
    complement,
    complement_in,
    exchange_step,
    find_isomorphism,
    is_decomposition,
    left_mult_image,
    lemma3_split,
    lemma3_split_in,
    projection_matrices,
    quotient,
    regular_representation,
    right_annihilator,
    submodule_sum,
)
from ringlab.core.regularity import (
    SplitData,
    all_powers_regular,
    inner_inverse_set,
    nilpotency_data,
    strongly_pi_regular_index,
    unit_from_isomorphism,
)
from ringlab.utils.log import get_logger

log = get_logger(__name__)


class ChainVariant(str, Enum):
    """Which construction produced a chain."""

    EXCHANGE = "exchange"
    REGULAR_POWERS = "regular-powers"

    @classmethod
    def from_theorem(cls, number: int) -> ChainVariant:
        variants = {2: cls.EXCHANGE, 4: cls.REGULAR_POWERS}
        if number not in variants:
            raise PreconditionViolated(f"theorem must be 2 or 4, got {number}")
        return variants[number]

    @property
    def theorem(self) -> int:
        return 2 if self is ChainVariant.EXCHANGE else 4


@dataclass(frozen=True, eq=False)
class ChainLevel:
    j: int
    A: Submodule
    A_prime: Submodule
    Y: Submodule
    Y_prime: Submodule | None
    E: Submodule  # A_prime + aA
    iso: ModuleMap  # E.as_module -> R/aR


@dataclass(frozen=True, eq=False)
class TheoremChain:
    a: Element
    variant: ChainVariant
    K: Submodule
    quotient: Quotient  # R/aR with its projection from R_R
    levels: tuple[ChainLevel, ...]

    @property
    def n(self) -> int:
        return len(self.levels)

    def X(self, j: int | None = None) -> Submodule:
        """A_1 + ... + A_j (default: all levels)."""
        j = self.n if j is None else j
        parts = [level.A for level in self.levels[:j]]
        return submodule_sum(parts) if parts else self.K.ambient.zero_submodule()

    @property
    def E(self) -> Submodule:
        return self.levels[-1].E

    @property
    def Y(self) -> Submodule:
        return self.levels[-1].Y


class CheckResult(BaseModel):
    """One named invariant and whether it held."""

    name: str
    passed: bool
    detail: str = ""


# ---------------------------------------------------------------------------
# Level isomorphisms
# ---------------------------------------------------------------------------

ToQuotient = Callable[[Mat], Mat]


def _level_iso(
    a: Element, E: Submodule, A_prime: Submodule, A: Submodule, Q: Quotient, send: ToQuotient
) -> ModuleMap:
    """E = A' + aA -> R/aR with v -> send(v) on A' and ax -> send(x) for x in A.

    Left multiplication by a is injective on A because A meets K trivially.
    """
    field = E.ambient.field
    spanning = np.vstack([A_prime.basis, A.basis @ a.left_matrix() % field.p])
    images = np.vstack([send(A_prime.basis), send(A.basis)])
    inv = field.inverse(spanning[:, list(E.pivots)])
    if inv is None or spanning.shape[0] != E.dim:
        raise VerificationFailure(f"E is not A' + aA with aA ~ A (dim {E.dim})")
    return ModuleMap(E.as_module, Q.module, inv @ images % field.p)


def _into_quotient(Q: Quotient) -> ToQuotient:
    return lambda rows: Q.projection.apply(rows)


def _through(level: ChainLevel) -> ToQuotient:
    return lambda rows: level.iso.apply(level.E.coordinates(rows))


def _next_level(
    a: Element,
    j: int,
    A: Submodule,
    A_prime: Submodule,
    Y: Submodule,
    Y_prime: Submodule | None,
    Q: Quotient,
    send: ToQuotient,
) -> ChainLevel:
    E = A_prime + left_mult_image(a, A)
    level = ChainLevel(j, A, A_prime, Y, Y_prime, E, _level_iso(a, E, A_prime, A, Q, send))
    log.debug("level %d: dim A=%d A'=%d Y=%d E=%d", j, A.dim, A_prime.dim, Y.dim, E.dim)
    return level


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def default_levels(a: Element) -> int:
    """The nilpotency index for nilpotent a, else the strongly pi-regular index (at least 1)."""
    index = nilpotency_data(a).index
    return index if index is not None else max(1, strongly_pi_regular_index(a))


def _certify(chain: TheoremChain) -> TheoremChain:
    failed = [c.name for c in verify_chain(chain.a, chain) if not c.passed]
    if failed:
        raise VerificationFailure(f"chain fails its own invariants: {'; '.join(failed)}")
    return chain


def theorem2_chain(a: Element, n: int) -> TheoremChain:
    """Exchange route.

    Base: R = K + B = A + aR; exchanging K into (A, aR) splits A = A_1 + A_1' and
    aR = Y_1 + Y_1' with R = K + A_1 + Y_1. Step: exchanging K into (E_n, aY_n) over
    C = X_n gives E_n = A_{n+1} + A_{n+1}' and aY_n = Y_{n+1} + Y_{n+1}'.
    """
    if n < 1:
        raise PreconditionViolated(f"level count must be >= 1, got {n}")
    if not inner_inverse_set(a).is_regular:
        raise NotRegular(f"{a} is not regular")
    RR = regular_representation(a.algebra)
    K, aR = right_annihilator(a), left_mult_image(a)
    Q = quotient(RR, aR)
    A = complement(RR, aR)
    if A is None:
        raise VerificationFailure("aR is not a summand although a is regular")

    step = exchange_step(RR, K, RR.zero_submodule(), [A, aR])
    levels = [
        _next_level(a, 1, step.D[0], step.E[0], step.D[1], step.E[1], Q, _into_quotient(Q))
    ]
    for j in range(2, n + 1):
        prev = levels[-1]
        X = submodule_sum([level.A for level in levels])
        step = exchange_step(RR, K, X, [prev.E, left_mult_image(a, prev.Y)])
        levels.append(
            _next_level(a, j, step.D[0], step.E[0], step.D[1], step.E[1], Q, _through(prev))
        )
    return _certify(TheoremChain(a, ChainVariant.EXCHANGE, K, Q, tuple(levels)))


def theorem4_chain(a: Element, n: int) -> TheoremChain:
    """Regular-powers route.

    Base: K + aR = K + Y_1 by the splitting lemma, Y_1' = K n aR, K = Y_1' + A_1',
    and A_1 complements K + aR. Step: K + a^{n+1}R = K + Y_{n+1}, then the splitting
    lemma on R = (K + Y_{n+1} + X_n) + E_n gives E_n = A_{n+1} + A_{n+1}'.
    """
    if n < 1:
        raise PreconditionViolated(f"level count must be >= 1, got {n}")
    powers = all_powers_regular(a)
    if not powers.regular:
        raise PowersNotRegular(powers.failing_exponent)
    RR = regular_representation(a.algebra)
    K, aR = right_annihilator(a), left_mult_image(a)
    Q = quotient(RR, aR)

    base = lemma3_split_in(K + aR, K, aR)
    Y, Y_prime = base.C, base.D
    A_prime = complement_in(K, Y_prime)
    A = complement(RR, K + aR)
    if A_prime is None or A is None:
        raise VerificationFailure("K + aR or K n aR is not a summand although powers are regular")
    levels = [_next_level(a, 1, A, A_prime, Y, Y_prime, Q, _into_quotient(Q))]

    for j in range(2, n + 1):
        prev = levels[-1]
        ajR = left_mult_image(power(a, j))
        split = lemma3_split_in(K + ajR, K, ajR)
        Y, Y_prime = split.C, split.D
        X = submodule_sum([level.A for level in levels])
        step = lemma3_split(RR, K + Y + X, prev.E)
        levels.append(_next_level(a, j, step.C, step.D, Y, Y_prime, Q, _through(prev)))
    return _certify(TheoremChain(a, ChainVariant.REGULAR_POWERS, K, Q, tuple(levels)))


def build_chain(a: Element, theorem: int, n: int | None = None) -> TheoremChain:
    variant = ChainVariant.from_theorem(theorem)
    builder = theorem2_chain if variant is ChainVariant.EXCHANGE else theorem4_chain
    return builder(a, n if n is not None else default_levels(a))


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def verify_chain(a: Element, chain: TheoremChain) -> list[CheckResult]:
    """Re-check every chain invariant from subspace arithmetic on the stored bases.

    Nothing computed during construction is reused except the stored bases and
    iso matrices themselves; a check that raises counts as failed.
    """
    results: list[CheckResult] = []

    def check(name: str, test: Callable[[], bool | tuple[bool, str]]) -> None:
        try:
            outcome = test()
        except RingLabError as exc:
            results.append(CheckResult(name=name, passed=False, detail=exc.message))
            return
        passed, detail = outcome if isinstance(outcome, tuple) else (outcome, "")
        results.append(CheckResult(name=name, passed=bool(passed), detail=detail))

    RR = regular_representation(a.algebra)
    K, aR = right_annihilator(a), left_mult_image(a)
    Q = quotient(RR, aR)
    check("element matches", lambda: chain.a == a)
    check("K = r(a)", lambda: chain.K == K)
    check("levels present", lambda: chain.n >= 1)

    previous: ChainLevel | None = None
    for j, level in enumerate(chain.levels, start=1):
        tag = f"level {j}"
        As = [lvl.A for lvl in chain.levels[:j]]
        ajR = left_mult_image(power(a, j))
        aA = left_mult_image(a, level.A)
        aY = left_mult_image(a, level.Y)
        aAs = [left_mult_image(a, A) for A in As]
        subs = [level.A, level.A_prime, level.Y, level.E]

        # each check runs immediately, so the lambdas see this iteration's values
        check(f"{tag}: numbered {j}", lambda: level.j == j)
        check(f"{tag}: right ideals", lambda: all(s.is_closed() for s in subs))
        check(f"{tag}: R = K + X_j + Y_j", lambda: is_decomposition([K, *As, level.Y]))
        check(f"{tag}: E_j = A_j' + aA_j", lambda: is_decomposition([level.A_prime, aA], level.E))
        check(f"{tag}: R = X_j + E_j + aY_j", lambda: is_decomposition([*As, level.E, aY]))
        check(
            f"{tag}: aR = aA_1 + ... + aA_j + aY_j",
            lambda: is_decomposition([*aAs, aY], aR),
        )
        check(f"{tag}: Y_j in a^jR", lambda: level.Y <= ajR)
        if previous is not None:
            prev = previous
            check(
                f"{tag}: E_(j-1) = A_j + A_j'",
                lambda: is_decomposition([level.A, level.A_prime], prev.E),
            )
            check(f"{tag}: dim Y_j <= dim Y_(j-1)", lambda: level.Y.dim <= prev.Y.dim)
        check(f"{tag}: stored map E_j -> R/aR is an isomorphism", lambda: _iso_holds(level, Q))
        check(f"{tag}: E_j ~ R/aR by search", lambda: _search(level.E.as_module, Q.module))

        if chain.variant is ChainVariant.REGULAR_POWERS:
            nxt = left_mult_image(power(a, j + 1))
            check(f"{tag}: K + Y_j = K + a^jR", lambda: is_decomposition([K, level.Y], K + ajR))
            check(f"{tag}: aY_j = a^(j+1)R", lambda: aY == nxt)
            if level.Y_prime is not None:
                check(f"{tag}: Y_j' = K n a^jR", lambda: level.Y_prime == (K & ajR))
        elif level.Y_prime is not None:
            above = aR if previous is None else left_mult_image(a, previous.Y)
            check(
                f"{tag}: aY_(j-1) = Y_j + Y_j'",
                lambda: is_decomposition([level.Y, level.Y_prime], above),
            )
        previous = level

    if previous is not None and power(a, chain.n).is_zero:
        last = previous
        check("final: Y_n = 0", lambda: last.Y.is_zero)
        check("final: K ~ E_n by search", lambda: _search(K.as_module, last.E.as_module))
    return results


def _iso_holds(level: ChainLevel, Q: Quotient) -> tuple[bool, str]:
    iso = ModuleMap(level.E.as_module, Q.module, np.asarray(level.iso.matrix))
    if not iso.is_linear():
        return False, "not R-linear"
    return iso.is_bijective(), f"rank {iso.rank} of {Q.module.dim}"


def _search(M: RightModule, N: RightModule) -> tuple[bool, str]:
    found = find_isomorphism(M, N)
    return found.verdict is Verdict.TRUE, f"{found.verdict.value} ({found.method})"


# ---------------------------------------------------------------------------
# Unit witness
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class UnitWitness:
    a: Element
    u: Element
    x: Element  # inner inverse the construction started from
    iso_used: ModuleMap  # K.as_module -> R/aR
    in_inner_inverse_set: bool

    @property
    def inner_inverse_check(self) -> bool:
        return self.a * self.u * self.a == self.a

    def verify(self) -> bool:
        return self.u.is_unit and self.inner_inverse_check and self.in_inner_inverse_set


def unit_witness(a: Element, chain: TheoremChain) -> UnitWitness:
    """Turn a chain with a^n = 0 into a unit u with aua = a.

    With Y_n = 0 both K and E_n complement X_n, so projecting K onto E_n along X_n
    and applying the level isomorphism gives phi: K -> R/aR; then
    u = xax + phi^-1([1]) for the first inner inverse x.
    """
    n = chain.n
    if n == 0 or not power(a, n).is_zero:
        raise NotNilpotentAtThisLevel(f"a^{n} != 0 for {a}")
    last = chain.levels[-1]
    if not last.Y.is_zero:
        raise VerificationFailure(f"Y_{n} != 0 although a^{n} = 0")
    inner = inner_inverse_set(a)
    x = inner.first()
    if x is None:
        raise NotRegular(f"{a} is not regular")

    p = a.algebra.p
    onto_E = projection_matrices([chain.X(), last.E])[1]
    K = chain.K
    phi = ModuleMap(
        K.as_module, chain.quotient.module, last.iso.apply(last.E.coordinates(K.basis @ onto_E % p))
    )
    u = unit_from_isomorphism(a, x, K, phi, chain.quotient.projection)
    witness = UnitWitness(a, u, x, phi, inner.contains(u))
    if not witness.verify():
        raise VerificationFailure(f"unit witness for {a} does not verify")
    log.debug("unit witness for %s: u = %s", a, u)
    return witness


# ---------------------------------------------------------------------------
# Witness assembled from the two corners of a split
# ---------------------------------------------------------------------------


class SplitWitness(NamedTuple):
    u: Element
    unit_piece: Element  # inverse of ea in eRe, embedded in R
    nil_piece: Element  # witness for (1-e)a in (1-e)R(1-e), embedded in R
    nil_chain: TheoremChain | None


def split_unit_witness(split: SplitData) -> SplitWitness:
    """u = (ea)^-1 + u' with u' a witness for the nilpotent part inside its corner.

    The corner witness comes from :func:`theorem4_chain` and :func:`unit_witness` run
    in (1-e)R(1-e); cross terms vanish, so aua = a in R.
    """
    a = split.a
    R = a.algebra
    if split.unit_inverse is None:
        raise VerificationFailure("unit part has no inverse in eRe")
    unit_piece = split.unit_corner.from_corner(split.unit_inverse)
    chain = None
    if split.nil_corner.degenerate:
        nil_piece = R.zero()
    else:
        b = split.nil_part
        chain = theorem4_chain(b, split.nil_index or 1)
        nil_piece = split.nil_corner.from_corner(unit_witness(b, chain).u)
    u = unit_piece + nil_piece
    if not u.is_unit or a * u * a != a:
        raise VerificationFailure(f"assembled witness for {a} does not verify")
    return SplitWitness(u, unit_piece, nil_piece, chain)
