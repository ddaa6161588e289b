"""Finite right modules over a FiniteAlgebra.

A right module of dimension n is F_p^n with one n x n matrix per algebra basis
element: ``m @ action[i]`` is ``m * b_i``. Submodules live inside a fixed ambient
module and are stored by their canonical RREF basis. Module maps act on row
vectors, so a map M -> N is a ``dim M x dim N`` matrix F and R-linearity reads
``A_i @ F == F @ B_i`` for the two action families.

Every linear system below (retractions, sections, hom spaces) is solved with
:meth:`PrimeField.solve_affine`; its particular solution sets all free variables
to zero, which is the tie-breaking rule whenever several answers exist.
"""

from __future__ import annotations

import functools
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import NamedTuple

import numpy as np

from ringlab.core.algebra import Element, FiniteAlgebra
from ringlab.core.errors import (
    AlgebraMismatch,
    AmbientMismatch,
    CapExceeded,
    DimensionMismatch,
    NotASubmodule,
    NotASummand,
    PreconditionViolated,
    SumNotWhole,
    VerificationFailure,
)
from ringlab.core.exactla import Mat, PrimeField, Subspace, Vec, subspace_calculus
from ringlab.utils.config import config
from ringlab.utils.helpers import chunk_ranges
from ringlab.utils.log import get_logger

log = get_logger(__name__)

BATCH = 4096


class Verdict(str, Enum):
    """Outcome of a search that may stop at a cap."""

    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


# ---------------------------------------------------------------------------
# Modules, submodules, maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RightModule:
    """F_p^dim with a right action of ``algebra``."""

    algebra: FiniteAlgebra
    dim: int
    action: tuple[Mat, ...]
    name: str = "M"

    @property
    def field(self) -> PrimeField:
        return self.algebra.field

    @property
    def p(self) -> int:
        return self.algebra.p

    def __repr__(self) -> str:
        return f"RightModule({self.name}, dim={self.dim}, over {self.algebra.name})"

    @cached_property
    def _stack(self) -> np.ndarray:
        if not self.action:
            return np.zeros((0, self.dim, self.dim), dtype=np.int64)
        return np.stack(self.action)

    def action_matrix(self, r: Element | Vec) -> Mat:
        """The matrix of m -> m * r."""
        coords = r.coords if isinstance(r, Element) else np.asarray(r, dtype=np.int64)
        return np.einsum("i,iab->ab", coords, self._stack) % self.p

    def act(self, v: Vec, r: Element | Vec) -> Vec:
        return (np.asarray(v) @ self.action_matrix(r)) % self.p

    def satisfies_axioms(self) -> bool:
        """m * 1 = m and (m * b_i) * b_j = m * (b_i b_j) for all i, j."""
        if not np.array_equal(self.action_matrix(self.algebra.one), self.field.eye(self.dim)):
            return False
        lhs = np.einsum("iab,jbc->ijac", self._stack, self._stack) % self.p
        rhs = np.einsum("ijk,kac->ijac", self.algebra.mul, self._stack) % self.p
        return bool(np.array_equal(lhs, rhs))

    def is_closed(self, space: Subspace) -> bool:
        """Whether ``space`` is stable under every action matrix."""
        return all(not np.any(space.reduce(space.basis @ x % self.p)) for x in self.action)

    def submodule(self, vectors) -> Submodule:
        """The span of ``vectors``; raises NotASubmodule when it is not action-closed."""
        space = self.field.span(vectors, self.dim)
        if not self.is_closed(space):
            raise NotASubmodule(f"span is not closed under the action on {self.name}")
        return Submodule(self, space)

    def generated(self, vectors) -> Submodule:
        """The smallest submodule containing ``vectors``."""
        space = self.field.span(vectors, self.dim)
        while True:
            moved = [space.basis @ x % self.p for x in self.action]
            grown = self.field.span(np.vstack([space.basis, *moved]), self.dim)
            if grown.dim == space.dim:
                return Submodule(self, space)
            space = grown

    def zero_submodule(self) -> Submodule:
        return Submodule(self, Subspace.zero(self.field, self.dim))

    def whole(self) -> Submodule:
        return Submodule(self, Subspace.whole(self.field, self.dim))


@dataclass(frozen=True, eq=False)
class Submodule:
    """An action-closed subspace of ``ambient``."""

    ambient: RightModule
    space: Subspace

    @property
    def basis(self) -> Mat:
        return self.space.basis

    @property
    def pivots(self) -> tuple[int, ...]:
        return self.space.pivots

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def is_zero(self) -> bool:
        return self.space.is_zero

    @property
    def is_whole(self) -> bool:
        return self.space.is_whole

    def __repr__(self) -> str:
        return f"Submodule(dim={self.dim} of {self.ambient.name}, basis={self.basis.tolist()})"

    def _same(self, other: Submodule) -> None:
        if other.ambient is not self.ambient:
            raise AmbientMismatch(f"submodules of {self.ambient.name} and {other.ambient.name}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Submodule):
            return NotImplemented
        return other.ambient is self.ambient and self.space == other.space

    def __hash__(self) -> int:
        return hash((id(self.ambient), self.space))

    def __add__(self, other: Submodule) -> Submodule:
        self._same(other)
        return Submodule(self.ambient, self.space + other.space)

    def __and__(self, other: Submodule) -> Submodule:
        self._same(other)
        return Submodule(self.ambient, self.space & other.space)

    intersection = __and__

    def __le__(self, other: Submodule) -> bool:
        self._same(other)
        return other.space.contains_space(self.space)

    def contains(self, v: Vec) -> bool:
        return self.space.contains(v)

    def is_closed(self) -> bool:
        return self.ambient.is_closed(self.space)

    @cached_property
    def as_module(self) -> RightModule:
        """This submodule as a module in its own RREF coordinates."""
        p = self.ambient.p
        pivots = list(self.pivots)
        action = tuple((self.basis @ x % p)[:, pivots] for x in self.ambient.action)
        name = f"{self.ambient.name}|{self.dim}"
        return RightModule(self.ambient.algebra, self.dim, action, name)

    def coordinates(self, v: Vec | Mat) -> Vec | Mat:
        """Coordinates of vectors of this submodule in its RREF basis."""
        return self.space.coords(v)

    def restrict(self, inner: Submodule) -> Submodule:
        """``inner`` (a submodule of the ambient inside self) as a submodule of ``as_module``."""
        if not inner <= self:
            raise NotASubmodule("restricted module is not contained in the enclosing one")
        coords = self.coordinates(inner.basis)
        return Submodule(self.as_module, self.ambient.field.span(coords, self.dim))

    def lift(self, inner: Submodule) -> Submodule:
        """A submodule of ``as_module`` carried back into the ambient module."""
        if inner.ambient is not self.as_module:
            raise AmbientMismatch("lifted submodule does not live in this submodule")
        rows = inner.basis @ self.basis % self.ambient.p
        return Submodule(self.ambient, self.ambient.field.span(rows, self.ambient.dim))


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """A matrix ``source.dim x target.dim`` acting on row vectors."""

    source: RightModule
    target: RightModule
    matrix: Mat

    def __post_init__(self) -> None:
        if self.matrix.shape != (self.source.dim, self.target.dim):
            raise DimensionMismatch(
                f"map matrix {self.matrix.shape} for {self.source.dim} -> {self.target.dim}"
            )

    def apply(self, v: Vec | Mat) -> Vec | Mat:
        return np.asarray(v) @ self.matrix % self.source.p

    def is_linear(self) -> bool:
        """Commutes with the action of every algebra basis element."""
        p = self.source.p
        return all(
            np.array_equal(a @ self.matrix % p, self.matrix @ b % p)
            for a, b in zip(self.source.action, self.target.action)
        )

    @property
    def rank(self) -> int:
        return self.source.field.rank(self.matrix)

    def is_bijective(self) -> bool:
        return self.source.dim == self.target.dim == self.rank

    def inverse(self) -> ModuleMap | None:
        inv = self.source.field.inverse(self.matrix) if self.source.dim == self.target.dim else None
        return None if inv is None else ModuleMap(self.target, self.source, inv)


def is_direct(parts: Sequence[Submodule]) -> bool:
    """Whether the sum of ``parts`` is direct."""
    if not parts:
        return True
    total = submodule_sum(parts)
    return total.dim == sum(part.dim for part in parts)


def submodule_sum(parts: Sequence[Submodule]) -> Submodule:
    if not parts:
        raise PreconditionViolated("sum of no submodules")
    ambient = parts[0].ambient
    if any(part.ambient is not ambient for part in parts):
        raise AmbientMismatch("summing submodules of different modules")
    rows = np.vstack([part.basis for part in parts])
    return Submodule(ambient, ambient.field.span(rows, ambient.dim))


def is_decomposition(parts: Sequence[Submodule], whole: Submodule | None = None) -> bool:
    """Whether ``parts`` form a direct sum equal to ``whole`` (default: the ambient)."""
    if not parts:
        return whole is not None and whole.is_zero
    target = whole if whole is not None else parts[0].ambient.whole()
    return is_direct(parts) and submodule_sum(parts) == target


def projection_matrices(parts: Sequence[Submodule]) -> list[Mat]:
    """Projections of the ambient module onto each part along the others.

    The parts must decompose the ambient module; raises PreconditionViolated otherwise.
    """
    if not parts:
        raise PreconditionViolated("no parts to project onto")
    ambient = parts[0].ambient
    field = ambient.field
    if not is_decomposition(parts):
        raise PreconditionViolated("parts do not decompose the ambient module")
    stacked = np.vstack([part.basis for part in parts])
    inv = field.inverse(stacked)
    out, offset = [], 0
    for part in parts:
        block = inv[:, offset : offset + part.dim]
        out.append(block @ part.basis % field.p)
        offset += part.dim
    return out


@dataclass(frozen=True, eq=False)
class DirectSumDecomposition:
    """``ambient`` written as a direct sum of ``parts``."""

    ambient: RightModule
    parts: tuple[Submodule, ...]

    def is_valid(self) -> bool:
        if any(part.ambient is not self.ambient or not part.is_closed() for part in self.parts):
            return False
        if not self.parts:
            return self.ambient.dim == 0
        return is_decomposition(self.parts)

    @property
    def dims(self) -> list[int]:
        return [part.dim for part in self.parts]


# ---------------------------------------------------------------------------
# R_R and its right ideals
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=64)
def regular_representation(R: FiniteAlgebra) -> RightModule:
    """R as a right module over itself."""
    return RightModule(R, R.dim, R.right_action, f"{R.name}_{R.name}")


def right_annihilator(a: Element) -> Submodule:
    """r(a) = {x : ax = 0}."""
    RR = regular_representation(a.algebra)
    return Submodule(RR, a.algebra.field.left_nullspace(a.left_matrix()))


def left_mult_image(a: Element, S: Submodule | None = None) -> Submodule:
    """aS = {as : s in S}; defaults to aR."""
    R = a.algebra
    RR = regular_representation(R)
    S = S if S is not None else RR.whole()
    if S.ambient is not RR:
        raise AmbientMismatch("left multiplication needs a submodule of R_R")
    return Submodule(RR, R.field.span(S.basis @ a.left_matrix() % R.p, R.dim))


class Quotient(NamedTuple):
    module: RightModule
    projection: ModuleMap


def quotient(M: RightModule, N: Submodule) -> Quotient:
    """M/N on the non-pivot coordinates of N's RREF basis."""
    if N.ambient is not M or not N.is_closed():
        raise NotASubmodule(f"quotient of {M.name} by something that is not its submodule")
    p = M.p
    free = [c for c in range(M.dim) if c not in N.pivots]
    proj = N.space.reduce(M.field.eye(M.dim))[:, free] % p
    action = tuple(x[free, :] @ proj % p for x in M.action)
    Q = RightModule(M.algebra, len(free), action, f"{M.name}/{N.dim}")
    return Quotient(Q, ModuleMap(M, Q, proj))


# ---------------------------------------------------------------------------
# Hom spaces and isomorphism search
# ---------------------------------------------------------------------------


def _commuting_constraints(a_list: Sequence[Mat], b_list: Sequence[Mat], m: int, n: int) -> Mat:
    """Rows of the system A_i F - F B_i = 0 on row-major vec(F), F of shape m x n."""
    eye_m, eye_n = np.eye(m, dtype=np.int64), np.eye(n, dtype=np.int64)
    blocks = [np.kron(a, eye_n) - np.kron(eye_m, b.T) for a, b in zip(a_list, b_list)]
    if not blocks:
        return np.zeros((0, m * n), dtype=np.int64)
    return np.vstack(blocks)


def _check_algebra(M: RightModule, N: RightModule) -> None:
    if M.algebra is not N.algebra:
        raise AlgebraMismatch(f"modules over {M.algebra.name} and {N.algebra.name}")


def hom_space(M: RightModule, N: RightModule) -> Subspace:
    """Hom_R(M, N) as a subspace of row-major vectorized dim M x dim N matrices."""
    _check_algebra(M, N)
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return Subspace.zero(M.field, m * n)
    system = _commuting_constraints(M.action, N.action, m, n) % M.p
    return M.field.nullspace(system)


def hom_basis(M: RightModule, N: RightModule) -> list[ModuleMap]:
    """A basis of Hom_R(M, N)."""
    space = hom_space(M, N)
    return [ModuleMap(M, N, row.reshape(M.dim, N.dim)) for row in space.basis]


def annihilator_profile(M: RightModule) -> tuple[int, ...]:
    """dim {m : m b_i = 0} for every basis element; an isomorphism invariant."""
    return tuple(M.dim - M.field.rank(x) for x in M.action)


class IsoSearch(NamedTuple):
    verdict: Verdict
    iso: ModuleMap | None
    method: str


def _maps_from(space: Subspace, coeffs: Mat, m: int, n: int) -> np.ndarray:
    return (coeffs @ space.basis % space.field.p).reshape(-1, m, n)


def find_isomorphism(M: RightModule, N: RightModule) -> IsoSearch:
    """Search Hom(M, N) for a bijection.

    Order: dimensions, annihilator profiles, exhaustive scan of the hom space in
    lexicographic coefficient order when it fits ``hom_enumeration_cap``, then
    seeded random sampling. FALSE is only reported after an exhaustive scan.
    """
    _check_algebra(M, N)
    if M.dim != N.dim:
        return IsoSearch(Verdict.FALSE, None, "dimension")
    if M.dim == 0:
        return IsoSearch(Verdict.TRUE, ModuleMap(M, N, M.field.zeros(0, 0)), "trivial")
    if annihilator_profile(M) != annihilator_profile(N):
        return IsoSearch(Verdict.FALSE, None, "annihilator profile")

    space = hom_space(M, N)
    k, n, field = space.dim, M.dim, M.field
    if k == 0:
        return IsoSearch(Verdict.FALSE, None, "hom space")

    total = field.p**k
    if total <= config.hom_enumeration_cap:
        for start, stop in chunk_ranges(total, BATCH):
            maps = _maps_from(space, field.digits(start, stop, k), n, n)
            hits = np.flatnonzero(field.invertible_mask(maps))
            if hits.size:
                return IsoSearch(Verdict.TRUE, ModuleMap(M, N, maps[hits[0]]), "enumeration")
        return IsoSearch(Verdict.FALSE, None, "enumeration")

    log.info("hom space of size %d^%d above cap, sampling", field.p, k)
    rng = np.random.default_rng(config.random_seed)
    remaining = config.random_trials
    while remaining > 0:
        batch = min(BATCH, remaining)
        coeffs = rng.integers(0, field.p, size=(batch, k), dtype=np.int64)
        maps = _maps_from(space, coeffs, n, n)
        hits = np.flatnonzero(field.invertible_mask(maps))
        if hits.size:
            return IsoSearch(Verdict.TRUE, ModuleMap(M, N, maps[hits[0]]), "sampling")
        remaining -= batch
    log.warning("no isomorphism found in %d samples; verdict unknown", config.random_trials)
    return IsoSearch(Verdict.UNKNOWN, None, "sampling")


# ---------------------------------------------------------------------------
# Summands
# ---------------------------------------------------------------------------


def complement(P: RightModule, A: Submodule) -> Submodule | None:
    """C with P = A + C direct, or None when A is not a summand.

    Solves for an R-linear retraction F: P -> A (``A.basis @ F = I``); C = ker F.
    """
    if A.ambient is not P:
        raise NotASubmodule(f"complement of a submodule that does not live in {P.name}")
    n, k, field = P.dim, A.dim, P.field
    if k == 0:
        return P.whole()
    if k == n:
        return P.zero_submodule()
    linear = _commuting_constraints(P.action, A.as_module.action, n, k)
    retract = np.kron(A.basis, np.eye(k, dtype=np.int64))
    system = np.vstack([linear, retract]) % field.p
    zeros = np.zeros(linear.shape[0], dtype=np.int64)
    rhs = np.concatenate([zeros, np.eye(k, dtype=np.int64).ravel()])
    sol = field.solve_affine(system, rhs)
    if sol is None:
        return None
    retraction = sol.particular.reshape(n, k)
    return Submodule(P, field.left_nullspace(retraction))


def complement_in(S: Submodule, A: Submodule) -> Submodule | None:
    """A complement of A inside the submodule S (A must lie in S)."""
    inner = complement(S.as_module, S.restrict(A))
    return None if inner is None else S.lift(inner)


class Lemma3Split(NamedTuple):
    C: Submodule
    D: Submodule
    complement: Submodule  # the A' used for the projection


def lemma3_split(P: RightModule, A: Submodule, B: Submodule) -> Lemma3Split:
    """For P = A + B with A a summand: B = C + D (direct), P = A + C (direct), D = A n B.

    Takes A' with P = A + A', projects B onto A' along A and solves for an R-linear
    section of that surjection; C is the image of the section. P must be projective.
    """
    for sub in (A, B):
        if sub.ambient is not P:
            raise NotASubmodule(f"split inputs must be submodules of {P.name}")
    field = P.field
    calc = subspace_calculus(A.space, B.space)
    if not calc.sum.is_whole:
        raise SumNotWhole(f"A + B has dimension {calc.sum.dim}, P has {P.dim}")
    other = complement(P, A)
    if other is None:
        raise NotASummand("A is not a direct summand of P")

    D = Submodule(P, calc.intersection)
    if other.is_zero:
        C = P.zero_submodule()
    else:
        rho = projection_matrices([A, other])[1]
        projected = B.basis @ rho % field.p
        kp, b = other.dim, B.dim
        linear = _commuting_constraints(other.as_module.action, B.as_module.action, kp, b)
        section = np.kron(np.eye(kp, dtype=np.int64), projected.T)
        system = np.vstack([linear, section]) % field.p
        rhs = np.concatenate(
            [np.zeros(linear.shape[0], dtype=np.int64), other.basis.ravel()]
        )
        sol = field.solve_affine(system, rhs)
        if sol is None:
            raise PreconditionViolated("projection of B onto the complement does not split")
        lifted = sol.particular.reshape(kp, b) @ B.basis % field.p
        C = Submodule(P, field.span(lifted, P.dim))

    if not (is_decomposition([A, C]) and C <= B and is_decomposition([C, D], B)):
        raise VerificationFailure("split output fails P = A + C or B = C + D")
    return Lemma3Split(C, D, other)


def lemma3_split_in(S: Submodule, A: Submodule, B: Submodule) -> Lemma3Split:
    """:func:`lemma3_split` with P the submodule S of a larger module."""
    inner = lemma3_split(S.as_module, S.restrict(A), S.restrict(B))
    return Lemma3Split(S.lift(inner.C), S.lift(inner.D), S.lift(inner.complement))


# ---------------------------------------------------------------------------
# Endomorphisms and indecomposables
# ---------------------------------------------------------------------------


def _endomorphism_batches(M: RightModule) -> Iterator[np.ndarray]:
    """End(M) in lexicographic coefficient order, as stacks of matrices."""
    space = hom_space(M, M)
    k, field = space.dim, M.field
    total = field.p**k
    if total > config.endomorphism_cap:
        raise CapExceeded(f"|End({M.name})| = {field.p}^{k} exceeds {config.endomorphism_cap}")
    for start, stop in chunk_ranges(total, BATCH):
        yield _maps_from(space, field.digits(start, stop, k), M.dim, M.dim)


def _matrix_power(m: Mat, e: int, p: int) -> Mat:
    result = np.eye(m.shape[0], dtype=np.int64)
    base = m % p
    while e:
        if e & 1:
            result = result @ base % p
        base = base @ base % p
        e >>= 1
    return result


class Fitting(NamedTuple):
    image: Submodule
    kernel: Submodule
    idempotent: Mat  # projection onto image along kernel


def fitting_decomposition(f: ModuleMap) -> Fitting:
    """M = im f^n + ker f^n (direct) for an endomorphism f of an n-dimensional module."""
    M = f.source
    if f.target is not M:
        raise PreconditionViolated("Fitting decomposition needs an endomorphism")
    power = _matrix_power(f.matrix, M.dim, M.p)
    image = Submodule(M, M.field.span(power, M.dim))
    kernel = Submodule(M, M.field.left_nullspace(power))
    return Fitting(image, kernel, projection_matrices([image, kernel])[0])


def _splitting_endomorphism(M: RightModule) -> Mat | None:
    """First endomorphism that is neither invertible nor nilpotent."""
    for maps in _endomorphism_batches(M):
        mixed = ~(M.field.invertible_mask(maps) | M.field.nilpotent_mask(maps))
        hits = np.flatnonzero(mixed)
        if hits.size:
            return maps[hits[0]]
    return None


def is_local(M: RightModule) -> bool:
    """Every endomorphism is a unit or nilpotent (End(M) local); the zero module is not."""
    return M.dim > 0 and _splitting_endomorphism(M) is None


def indecomposable_summands(M: RightModule) -> DirectSumDecomposition:
    """Split M into indecomposables by repeated Fitting decompositions.

    A part is kept once its endomorphism ring has no element that is neither a unit
    nor nilpotent, i.e. no idempotent other than 0 and 1.
    """

    def split(S: Submodule) -> list[Submodule]:
        if S.dim <= 1:
            return [S]
        inner = S.as_module
        f = _splitting_endomorphism(inner)
        if f is None:
            return [S]
        fit = fitting_decomposition(ModuleMap(inner, inner, f))
        return split(S.lift(fit.image)) + split(S.lift(fit.kernel))

    parts = split(M.whole()) if M.dim else []
    log.debug("%s splits into indecomposables of dims %s", M.name, [s.dim for s in parts])
    return DirectSumDecomposition(M, tuple(parts))


# ---------------------------------------------------------------------------
# Exchange step
# ---------------------------------------------------------------------------


class ExchangeResult(NamedTuple):
    D: tuple[Submodule, ...]
    E: tuple[Submodule, ...]
    B: Submodule  # complement of M + C used for the projections
    pieces: tuple[Submodule, ...]  # indecomposable summands of M
    choices: tuple[int, ...]  # part index that absorbed each piece


def exchange_step(
    ambient: RightModule, M: Submodule, C: Submodule, parts: Sequence[Submodule]
) -> ExchangeResult:
    """Given ambient = M + B + C = (sum of parts) + C, split each part A_i = D_i + E_i
    with ambient = M + (sum of D_i) + C, all sums direct.

    M is decomposed into indecomposables N; each N is exchanged into the first part
    A_i whose projection composed with the projection back onto N is a unit of End(N).
    """
    subs = [M, C, *parts]
    if any(sub.ambient is not ambient for sub in subs):
        raise PreconditionViolated("exchange inputs must be submodules of the ambient module")
    if not parts or not is_decomposition([*parts, C]):
        raise PreconditionViolated("the parts and C do not decompose the ambient module")
    if not (M & C).is_zero:
        raise PreconditionViolated("M and C intersect")
    B = complement(ambient, M + C)
    if B is None:
        raise PreconditionViolated("M + C is not a direct summand")

    field = ambient.field
    split = indecomposable_summands(M.as_module)
    if not split.is_valid() or not all(is_local(part.as_module) for part in split.parts):
        raise VerificationFailure("M does not split into summands with local endomorphism rings")
    pieces = [M.lift(piece) for piece in split.parts]
    along_rest = projection_matrices([*pieces, B, C])

    D = list(parts)
    E = [ambient.zero_submodule() for _ in parts]
    placed: list[Submodule] = []
    choices: list[int] = []
    for s, piece in enumerate(pieces):
        rho = along_rest[s]
        current = projection_matrices([*placed, *D, C])
        chosen = None
        for i in range(len(D)):
            theta = piece.basis @ current[len(placed) + i] % field.p
            back = (theta @ rho % field.p)[:, list(piece.pivots)]
            if field.is_invertible(back):
                chosen = i
                break
        if chosen is None:
            raise VerificationFailure(f"no part absorbs summand {s}; End of it is not local")
        E[chosen] = E[chosen] + Submodule(ambient, field.span(theta, ambient.dim))
        D[chosen] = D[chosen] & Submodule(ambient, field.left_nullspace(rho))
        placed.append(piece)
        choices.append(chosen)
        log.debug("summand %d (dim %d) exchanged into part %d", s, piece.dim, chosen)

    for part, d, e in zip(parts, D, E):
        if not is_decomposition([d, e], part):
            raise VerificationFailure("exchange step broke A_i = D_i + E_i")
    if not is_decomposition([M, *D, C]):
        raise VerificationFailure("exchange step broke ambient = M + D + C")
    return ExchangeResult(tuple(D), tuple(E), B, tuple(pieces), tuple(choices))
