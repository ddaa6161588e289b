"""Exact dense linear algebra over a prime field F_p.

Matrices are numpy ``int64`` arrays with entries in ``[0, p)``. Vectors are rows
and a matrix acts on the right (``v -> v @ M``), so every subspace is the row
space of its basis. Bases are kept in reduced row-echelon form, which makes
equality of subspaces an array comparison.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from ringlab.core.errors import AmbientMismatch, DimensionMismatch, NonPrimeModulus
from ringlab.utils.config import config

Mat = npt.NDArray[np.int64]
Vec = npt.NDArray[np.int64]


def is_prime(n: int) -> bool:
    """Trial division primality check."""
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended Euclid: returns (g, s, t) with s*a + t*b = g."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return a, s0, t0


class RREF(NamedTuple):
    """Reduced row-echelon form of a matrix."""

    matrix: Mat
    rank: int
    pivots: tuple[int, ...]


@dataclass(frozen=True)
class PrimeField:
    """The prime field F_p with a precomputed inverse table."""

    p: int

    def __post_init__(self) -> None:
        if self.p > config.max_prime or not is_prime(self.p):
            raise NonPrimeModulus(f"modulus {self.p} is not a prime <= {config.max_prime}")

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        table = [0] * self.p
        for x in range(1, self.p):
            _, s, _ = _egcd(x, self.p)
            table[x] = s % self.p
        return tuple(table)

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.inverses[x]

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    def matrix(self, rows: Iterable | Mat, cols: int | None = None) -> Mat:
        """Coerce to a reduced 2-D matrix; ``cols`` fixes the width of empty input."""
        m = np.asarray(rows, dtype=np.int64)
        if m.size == 0:
            height = m.shape[0] if m.ndim == 2 else 0
            width = cols if cols is not None else (m.shape[1] if m.ndim == 2 else 0)
            return np.zeros((height, width), dtype=np.int64)
        if m.ndim == 1 and cols is not None:
            m = m.reshape(-1, cols)
        if m.ndim != 2 or (cols is not None and m.shape[1] != cols):
            raise DimensionMismatch(f"expected a matrix with {cols} columns, got shape {m.shape}")
        return m % self.p

    def vector(self, values: Iterable | Vec) -> Vec:
        v = np.asarray(values, dtype=np.int64)
        if v.ndim != 1:
            raise DimensionMismatch(f"expected a vector, got shape {v.shape}")
        return v % self.p

    def zeros(self, rows: int, cols: int) -> Mat:
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> Mat:
        return np.eye(n, dtype=np.int64)

    def matmul(self, a: Mat, b: Mat) -> Mat:
        return (a @ b) % self.p

    def random_matrix(self, rng: np.random.Generator, rows: int, cols: int) -> Mat:
        return rng.integers(0, self.p, size=(rows, cols), dtype=np.int64)

    def digits(self, start: int, stop: int, k: int) -> Mat:
        """Rows ``start..stop-1`` of the lexicographic listing of F_p^k (base-p digits)."""
        idx = np.arange(start, stop, dtype=np.int64)
        powers = self.p ** np.arange(k - 1, -1, -1, dtype=np.int64)
        return (idx[:, None] // powers[None, :]) % self.p

    # ------------------------------------------------------------------
    # Batched kernels over stacks of square matrices, shape (N, n, n)
    # ------------------------------------------------------------------

    def invertible_mask(self, stack: np.ndarray) -> np.ndarray:
        """Boolean mask of the invertible matrices in a stack."""
        p = self.p
        a = np.array(stack, dtype=np.int64) % p
        count, n = a.shape[0], a.shape[1]
        ok = np.ones(count, dtype=bool)
        if n == 0 or count == 0:
            return ok
        inverse = np.asarray(self.inverses, dtype=np.int64)
        idx = np.arange(count)
        for c in range(n):
            nonzero = a[:, c:, c] != 0
            ok &= nonzero.any(axis=1)
            r = c + np.argmax(nonzero, axis=1)
            row_c = a[idx, c].copy()
            a[idx, c] = a[idx, r]
            a[idx, r] = row_c
            a[:, c] = (a[:, c] * inverse[a[:, c, c]][:, None]) % p
            factors = a[:, :, c].copy()
            factors[:, c] = 0
            a = (a - factors[:, :, None] * a[:, c][:, None, :]) % p
        return ok

    def nilpotent_mask(self, stack: np.ndarray) -> np.ndarray:
        """Boolean mask of the nilpotent matrices in a stack (M^n = 0 for n x n)."""
        a = np.array(stack, dtype=np.int64) % self.p
        n = a.shape[1]
        reached = 1
        while reached < n:
            a = np.matmul(a, a) % self.p
            reached *= 2
        return ~a.reshape(a.shape[0], -1).any(axis=1)

    # ------------------------------------------------------------------
    # Elimination
    # ------------------------------------------------------------------

    def rref(self, m: Mat) -> RREF:
        """Reduced row-echelon form; pivots are the first nonzero entry in column order."""
        p = self.p
        a = np.array(m, dtype=np.int64) % p
        if a.ndim != 2:
            raise DimensionMismatch(f"expected a matrix, got shape {a.shape}")
        rows, cols = a.shape
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.flatnonzero(a[r:, c])
            if nz.size == 0:
                continue
            k = r + int(nz[0])
            if k != r:
                a[[r, k]] = a[[k, r]]
            a[r] = (a[r] * self.inverses[int(a[r, c])]) % p
            col = a[:, c].copy()
            col[r] = 0
            hit = np.flatnonzero(col)
            if hit.size:
                a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
            pivots.append(c)
            r += 1
        return RREF(a[:r], r, tuple(pivots))

    def rank(self, m: Mat) -> int:
        return self.rref(m).rank

    def span(self, vectors: Iterable | Mat, ambient_dim: int) -> Subspace:
        red = self.rref(self.matrix(vectors, ambient_dim))
        return Subspace(self, ambient_dim, red.matrix, red.pivots)

    def _kernel_from_rref(self, red: Mat, pivots: tuple[int, ...], cols: int) -> Subspace:
        free = [c for c in range(cols) if c not in pivots]
        basis = np.zeros((len(free), cols), dtype=np.int64)
        if free:
            basis[np.arange(len(free)), free] = 1
            if pivots:
                basis[:, list(pivots)] = (-red[: len(pivots)][:, free].T) % self.p
        return self.span(basis, cols)

    def nullspace(self, a: Mat) -> Subspace:
        """The subspace {x : a @ x = 0} of F_p^cols."""
        a = self.matrix(a)
        red = self.rref(a)
        return self._kernel_from_rref(red.matrix, red.pivots, a.shape[1])

    def left_nullspace(self, a: Mat) -> Subspace:
        """The subspace {v : v @ a = 0} of F_p^rows."""
        return self.nullspace(self.matrix(a).T)

    def solve_affine(self, a: Mat, b: Vec) -> AffineSolutionSet | None:
        """Exact solution set of a @ x = b, or None when b is outside the column space."""
        a = self.matrix(a)
        b = self.vector(b)
        if a.shape[0] != b.shape[0]:
            raise DimensionMismatch(f"system has {a.shape[0]} rows but rhs has {b.shape[0]}")
        cols = a.shape[1]
        red = self.rref(np.hstack([a, b[:, None]]))
        if red.pivots and red.pivots[-1] == cols:
            return None
        particular = np.zeros(cols, dtype=np.int64)
        for i, c in enumerate(red.pivots):
            particular[c] = red.matrix[i, cols]
        kernel = self._kernel_from_rref(red.matrix[:, :cols], red.pivots, cols)
        return AffineSolutionSet(particular, kernel)

    def inverse(self, m: Mat) -> Mat | None:
        """Inverse of a square matrix, or None when singular."""
        m = self.matrix(m)
        n = m.shape[0]
        if m.shape != (n, n):
            raise DimensionMismatch(f"inverse of non-square matrix {m.shape}")
        if n == 0:
            return m
        red = self.rref(np.hstack([m, self.eye(n)]))
        if red.pivots[n - 1] != n - 1:
            return None
        return red.matrix[:, n:]

    def is_invertible(self, m: Mat) -> bool:
        return m.shape[0] == m.shape[1] and self.rank(m) == m.shape[0]


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of F_p^n held by its canonical RREF basis."""

    field: PrimeField
    ambient_dim: int
    basis: Mat
    pivots: tuple[int, ...]

    @classmethod
    def zero(cls, field: PrimeField, n: int) -> Subspace:
        return cls(field, n, field.zeros(0, n), ())

    @classmethod
    def whole(cls, field: PrimeField, n: int) -> Subspace:
        return cls(field, n, field.eye(n), tuple(range(n)))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def is_whole(self) -> bool:
        return self.dim == self.ambient_dim

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self) -> int:
        return hash((self.field.p, self.ambient_dim, self.basis.tobytes()))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, basis={self.basis.tolist()})"

    def _check(self, other: Subspace) -> None:
        if self.field != other.field or self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch(
                f"subspaces of F_{self.field.p}^{self.ambient_dim} "
                f"and F_{other.field.p}^{other.ambient_dim}"
            )

    def reduce(self, v: Vec | Mat) -> Vec | Mat:
        """Remainder of v (or of each row of v) modulo this subspace."""
        v = np.asarray(v, dtype=np.int64)
        return (v - v[..., list(self.pivots)] @ self.basis) % self.field.p

    def coords(self, v: Vec | Mat) -> Vec | Mat:
        """Coordinates in the RREF basis of a vector (or rows) lying in the subspace."""
        return np.asarray(v, dtype=np.int64)[..., list(self.pivots)] % self.field.p

    def contains(self, v: Vec) -> bool:
        return not np.any(self.reduce(v))

    def contains_space(self, other: Subspace) -> bool:
        self._check(other)
        return not np.any(self.reduce(other.basis))

    def __add__(self, other: Subspace) -> Subspace:
        self._check(other)
        return self.field.span(np.vstack([self.basis, other.basis]), self.ambient_dim)

    def intersection(self, other: Subspace) -> Subspace:
        """Zassenhaus: row-reduce [[U, U], [V, 0]]; rows with zero left half span U ∩ V."""
        self._check(other)
        n = self.ambient_dim
        stacked = np.vstack(
            [
                np.hstack([self.basis, self.basis]),
                np.hstack([other.basis, np.zeros_like(other.basis)]),
            ]
        )
        red = self.field.rref(stacked)
        rows = [i for i, c in enumerate(red.pivots) if c >= n]
        return self.field.span(red.matrix[rows, n:], n)

    __and__ = intersection


class SubspaceCalculus(NamedTuple):
    sum: Subspace
    intersection: Subspace
    contains: Callable[[Vec], bool]


def subspace_calculus(u: Subspace, v: Subspace) -> SubspaceCalculus:
    """Sum, intersection and a membership test for the sum."""
    total = u + v
    return SubspaceCalculus(total, u & v, total.contains)


@dataclass(frozen=True, eq=False)
class AffineSolutionSet:
    """{particular + k : k in kernel}."""

    particular: Vec
    kernel: Subspace

    @property
    def field(self) -> PrimeField:
        return self.kernel.field

    @property
    def size(self) -> int:
        return self.field.p**self.kernel.dim

    def member(self, coeffs: Vec) -> Vec:
        return (self.particular + np.asarray(coeffs) @ self.kernel.basis) % self.field.p

    def contains(self, x: Vec) -> bool:
        return self.kernel.contains((np.asarray(x) - self.particular) % self.field.p)
