"""Finite-dimensional unital associative algebras over F_p via structure constants.

An algebra of dimension d has basis b_0..b_{d-1} with b_i * b_j = sum_k mul[i, j, k] b_k.
Elements are coordinate vectors. ``left_matrix(x)`` and ``right_matrix(y)`` act on
row vectors: ``r @ left_matrix(x) == x * r`` and ``r @ right_matrix(y) == r * y``.
"""

from __future__ import annotations

import hashlib
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ringlab.core.errors import (
    AlgebraMismatch,
    AssociativityViolation,
    CapExceeded,
    DimensionMismatch,
    NotIdempotent,
    UnitViolation,
)
from ringlab.core.exactla import Mat, PrimeField, Vec
from ringlab.utils.config import config


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    """A validated structure-constant algebra. Build with :func:`build_algebra`."""

    field: PrimeField
    mul: np.ndarray
    one: Vec
    labels: tuple[str, ...]
    name: str = "R"

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def dim(self) -> int:
        return self.mul.shape[0]

    @property
    def order(self) -> int:
        return self.p**self.dim

    @cached_property
    def fingerprint(self) -> str:
        """Content hash of (p, structure constants, identity)."""
        digest = hashlib.sha256()
        digest.update(f"{self.p}:{self.dim}:".encode())
        digest.update(self.mul.astype(np.int64).tobytes())
        digest.update(self.one.astype(np.int64).tobytes())
        return digest.hexdigest()[:16]

    def __repr__(self) -> str:
        return f"FiniteAlgebra({self.name}, p={self.p}, dim={self.dim})"

    # ------------------------------------------------------------------
    # Elements
    # ------------------------------------------------------------------

    def element(self, coords: Iterable[int] | Vec) -> Element:
        v = self.field.vector(coords)
        if v.shape[0] != self.dim:
            raise DimensionMismatch(f"{self.name} has dim {self.dim}, got {v.shape[0]} coordinates")
        return Element(self, v)

    def basis_element(self, i: int) -> Element:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return Element(self, v)

    def zero(self) -> Element:
        return Element(self, np.zeros(self.dim, dtype=np.int64))

    def identity(self) -> Element:
        return Element(self, self.one.copy())

    def product(self, x: Vec, y: Vec) -> Vec:
        return np.einsum("i,j,ijk->k", x, y, self.mul) % self.p

    def left_matrix(self, x: Vec) -> Mat:
        """Row j is x * b_j."""
        return np.einsum("i,ijk->jk", x, self.mul) % self.p

    def right_matrix(self, y: Vec) -> Mat:
        """Row i is b_i * y."""
        return np.einsum("j,ijk->ik", y, self.mul) % self.p

    @cached_property
    def right_action(self) -> tuple[Mat, ...]:
        """Right multiplication by each basis element."""
        return tuple(self.mul[:, i, :] % self.p for i in range(self.dim))

    # ------------------------------------------------------------------
    # Enumeration
    # ------------------------------------------------------------------

    def ensure_enumerable(self) -> None:
        if self.order > config.element_cap:
            raise CapExceeded(f"|{self.name}| = {self.p}^{self.dim} exceeds {config.element_cap}")

    def coords_block(self, start: int, stop: int) -> Mat:
        """Coordinates of the elements with indices in [start, stop), one per row."""
        return self.field.digits(start, stop, self.dim)

    def index_of(self, coords: Vec | Mat) -> int | np.ndarray:
        powers = self.p ** np.arange(self.dim - 1, -1, -1, dtype=np.int64)
        return np.asarray(coords, dtype=np.int64) @ powers

    def element_at(self, index: int) -> Element:
        return Element(self, self.coords_block(index, index + 1)[0])

    def elements(self) -> Iterator[Element]:
        """Every element in index order (guarded by the element cap)."""
        self.ensure_enumerable()
        for start in range(0, self.order, 4096):
            for row in self.coords_block(start, min(start + 4096, self.order)):
                yield Element(self, row)


@dataclass(frozen=True, eq=False)
class Element:
    """An element of a FiniteAlgebra given by its coordinates."""

    algebra: FiniteAlgebra
    coords: Vec

    def _other(self, other: Element | int) -> Element:
        if isinstance(other, Element):
            if other.algebra is not self.algebra:
                raise AlgebraMismatch(f"{self.algebra.name} vs {other.algebra.name}")
            return other
        return self.algebra.identity() * int(other)

    def __add__(self, other: Element | int) -> Element:
        other = self._other(other)
        return Element(self.algebra, (self.coords + other.coords) % self.algebra.p)

    __radd__ = __add__

    def __neg__(self) -> Element:
        return Element(self.algebra, (-self.coords) % self.algebra.p)

    def __sub__(self, other: Element | int) -> Element:
        return self + (-self._other(other))

    def __rsub__(self, other: int) -> Element:
        return self._other(other) - self

    def __mul__(self, other: Element | int) -> Element:
        if isinstance(other, Element):
            other = self._other(other)
            return Element(self.algebra, self.algebra.product(self.coords, other.coords))
        return Element(self.algebra, (self.coords * int(other)) % self.algebra.p)

    def __rmul__(self, scalar: int) -> Element:
        return Element(self.algebra, (self.coords * int(scalar)) % self.algebra.p)

    def __pow__(self, n: int) -> Element:
        return power(self, n)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return other.algebra is self.algebra and np.array_equal(self.coords, other.coords)

    def __hash__(self) -> int:
        return hash((id(self.algebra), self.coords.tobytes()))

    def __str__(self) -> str:
        terms = []
        for label, c in zip(self.algebra.labels, self.coords.tolist()):
            if c:
                terms.append(label if c == 1 else f"{c}*{label}")
        return "+".join(terms) or "0"

    def __repr__(self) -> str:
        return f"Element({self}, in {self.algebra.name})"

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coords)

    @property
    def is_idempotent(self) -> bool:
        return self * self == self

    def left_matrix(self) -> Mat:
        return self.algebra.left_matrix(self.coords)

    def right_matrix(self) -> Mat:
        return self.algebra.right_matrix(self.coords)

    def try_inverse(self) -> Element | None:
        return try_inverse(self)

    @property
    def is_unit(self) -> bool:
        return try_inverse(self) is not None


def power(a: Element, n: int) -> Element:
    """a^n by repeated squaring; a^0 = 1."""
    if n < 0:
        raise ValueError("negative exponent")
    result = a.algebra.identity()
    base = a
    while n:
        if n & 1:
            result = result * base
        base = base * base
        n >>= 1
    return result


def try_inverse(a: Element) -> Element | None:
    """Two-sided inverse of a, or None. Both sides are checked."""
    R = a.algebra
    sol = R.field.solve_affine(a.left_matrix().T, R.one)
    if sol is None:
        return None
    y = Element(R, sol.particular)
    if a * y != R.identity() or y * a != R.identity():
        return None
    return y


def _default_labels(d: int) -> tuple[str, ...]:
    return tuple(f"b{i}" for i in range(d))


def build_algebra(
    p: int,
    mul: Sequence | np.ndarray,
    one: Sequence[int] | Vec,
    labels: Sequence[str] | None = None,
    name: str = "R",
) -> FiniteAlgebra:
    """Validate structure constants and return the algebra.

    Raises:
        NonPrimeModulus: p is not a supported prime.
        DimensionMismatch: the table is not d x d x d or ``one`` has the wrong length.
        AssociativityViolation: reports the first failing basis triple.
        UnitViolation: ``one`` is not a two-sided identity.
    """
    field = PrimeField(p)
    table = np.asarray(mul, dtype=np.int64)
    if table.size == 0:
        table = np.zeros((0, 0, 0), dtype=np.int64)
    d = table.shape[0]
    if table.ndim != 3 or table.shape != (d, d, d):
        raise DimensionMismatch(f"structure constants must be d x d x d, got {table.shape}")
    table = table % p
    unit = np.asarray(one, dtype=np.int64).reshape(-1) % p
    if unit.shape != (d,):
        raise DimensionMismatch(f"identity has {unit.shape[0]} coordinates, expected {d}")

    for i in range(d):
        # (b_i b_j) b_k and b_i (b_j b_k), indexed [j, k, :]
        lhs = np.tensordot(table[i], table, axes=([1], [0])) % p
        rhs = np.tensordot(table, table[i], axes=([2], [0])) % p
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            j, k = int(bad[0][0]), int(bad[0][1])
            raise AssociativityViolation((i, j, k))

    eye = np.eye(d, dtype=np.int64)
    if not np.array_equal(np.einsum("i,ijk->jk", unit, table) % p, eye):
        raise UnitViolation("one * b_i != b_i for some i")
    if not np.array_equal(np.einsum("j,ijk->ik", unit, table) % p, eye):
        raise UnitViolation("b_i * one != b_i for some i")

    names = tuple(labels) if labels is not None else _default_labels(d)
    if len(names) != d or len(set(names)) != d:
        raise DimensionMismatch(f"need {d} distinct basis labels, got {list(names)}")
    return FiniteAlgebra(field, table, unit, names, name)


@dataclass(frozen=True, eq=False)
class CornerData:
    """The corner ring eRe with maps between its coordinates and R's."""

    e: Element
    corner: FiniteAlgebra
    embed: Mat  # k x d, corner coordinates -> R coordinates
    project: Mat  # d x k, r -> ere in corner coordinates

    @property
    def degenerate(self) -> bool:
        return self.corner.dim == 0

    def to_corner(self, x: Element) -> Element:
        return Element(self.corner, (x.coords @ self.project) % self.corner.p)

    def from_corner(self, y: Element) -> Element:
        return Element(self.e.algebra, (y.coords @ self.embed) % self.e.algebra.p)


def _sandwich(x: Element, y: Element) -> Mat:
    """Row i is x * b_i * y."""
    R = x.algebra
    return (x.left_matrix() @ y.right_matrix()) % R.p


def corner_algebra(e: Element) -> CornerData:
    """Presentation of eRe with identity e, basis from the RREF of {e b_i e}."""
    if not e.is_idempotent:
        raise NotIdempotent(f"{e} is not idempotent")
    R = e.algebra
    spanning = _sandwich(e, e)
    space = R.field.span(spanning, R.dim)
    basis, pivots = space.basis, list(space.pivots)
    k = space.dim
    table = np.zeros((k, k, k), dtype=np.int64)
    for s in range(k):
        for t in range(k):
            table[s, t] = R.product(basis[s], basis[t])[pivots]
    labels = []
    for s, row in enumerate(basis):
        nz = np.flatnonzero(row)
        labels.append(R.labels[nz[0]] if nz.size == 1 and row[nz[0]] == 1 else f"c{s}")
    corner = build_algebra(R.p, table, e.coords[pivots], labels, name=f"{R.name}[{e}]")
    return CornerData(e, corner, basis, spanning[:, pivots] % R.p)


def peirce_dimensions(e: Element) -> tuple[int, int, int, int]:
    """dims of eRe, eR(1-e), (1-e)Re, (1-e)R(1-e)."""
    if not e.is_idempotent:
        raise NotIdempotent(f"{e} is not idempotent")
    f = 1 - e
    rank = e.algebra.field.rank
    return (
        rank(_sandwich(e, e)),
        rank(_sandwich(e, f)),
        rank(_sandwich(f, e)),
        rank(_sandwich(f, f)),
    )
