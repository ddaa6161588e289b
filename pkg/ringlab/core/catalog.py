"""Preset ring catalog and element literals.

Presets are addressed by name:

    M(n,p)        n x n matrices over F_p, basis e11..enn
    T(n,p)        upper triangular n x n matrices over F_p
    FpC(n,p)      group algebra F_p[C_n], basis 1, g, g2, ...
    prod(A,B,...) direct product, labels prefixed f1., f2., ...
"""

from __future__ import annotations

import re
from collections.abc import Sequence

import numpy as np

from ringlab.core.algebra import Element, FiniteAlgebra, build_algebra
from ringlab.core.errors import (
    ElementSyntaxError,
    NonPrimeModulus,
    PresetOutOfRange,
    UnknownPreset,
)
from ringlab.utils.config import config

MAX_MATRIX_SIZE = 9  # single-digit matrix-unit labels


def _checked(n: int, p: int, dim: int, preset: str) -> None:
    if n < 1:
        raise PresetOutOfRange(f"{preset}: size must be >= 1, got {n}")
    if dim > config.max_dim:
        raise PresetOutOfRange(f"{preset}: dimension {dim} exceeds {config.max_dim}")


def _build(p: int, table: np.ndarray, one: np.ndarray, labels: Sequence[str], name: str):
    try:
        return build_algebra(p, table, one, labels, name)
    except NonPrimeModulus as exc:
        raise PresetOutOfRange(f"{name}: {exc.message}") from exc


def matrix_algebra(n: int, p: int) -> FiniteAlgebra:
    """M_n(F_p) with matrix units e_ij at index (i-1)*n + (j-1)."""
    _checked(n, p, n * n, "M")
    if n > MAX_MATRIX_SIZE:
        raise PresetOutOfRange(f"M: size {n} exceeds {MAX_MATRIX_SIZE}")
    d = n * n
    table = np.zeros((d, d, d), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                table[i * n + j, j * n + k, i * n + k] = 1
    one = np.zeros(d, dtype=np.int64)
    one[[i * n + i for i in range(n)]] = 1
    labels = [f"e{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return _build(p, table, one, labels, f"M({n},{p})")


def upper_triangular(n: int, p: int) -> FiniteAlgebra:
    """T_n(F_p), basis e_ij for i <= j in lexicographic order."""
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    _checked(n, p, len(pairs), "T")
    if n > MAX_MATRIX_SIZE:
        raise PresetOutOfRange(f"T: size {n} exceeds {MAX_MATRIX_SIZE}")
    index = {pair: t for t, pair in enumerate(pairs)}
    d = len(pairs)
    table = np.zeros((d, d, d), dtype=np.int64)
    for i, j in pairs:
        for k in range(j, n):
            table[index[i, j], index[j, k], index[i, k]] = 1
    one = np.zeros(d, dtype=np.int64)
    one[[index[i, i] for i in range(n)]] = 1
    labels = [f"e{i + 1}{j + 1}" for i, j in pairs]
    return _build(p, table, one, labels, f"T({n},{p})")


def cyclic_group_algebra(n: int, p: int) -> FiniteAlgebra:
    """F_p[C_n] on the basis g^0..g^{n-1}."""
    _checked(n, p, n, "FpC")
    table = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            table[i, j, (i + j) % n] = 1
    one = np.zeros(n, dtype=np.int64)
    one[0] = 1
    labels = ["1", "g"] + [f"g{i}" for i in range(2, n)]
    return _build(p, table, one, labels[:n], f"FpC({n},{p})")


def product_algebra(factors: Sequence[FiniteAlgebra]) -> FiniteAlgebra:
    """Direct product with componentwise multiplication."""
    if not factors:
        raise PresetOutOfRange("prod: needs at least one factor")
    p = factors[0].p
    if any(f.p != p for f in factors):
        raise PresetOutOfRange("prod: factors must share the prime")
    d = sum(f.dim for f in factors)
    if d > config.max_dim:
        raise PresetOutOfRange(f"prod: dimension {d} exceeds {config.max_dim}")
    table = np.zeros((d, d, d), dtype=np.int64)
    one = np.zeros(d, dtype=np.int64)
    labels: list[str] = []
    offset = 0
    for t, f in enumerate(factors, start=1):
        block = slice(offset, offset + f.dim)
        table[block, block, block] = f.mul
        one[block] = f.one
        labels.extend(f"f{t}.{label}" for label in f.labels)
        offset += f.dim
    name = "prod(" + ",".join(f.name for f in factors) + ")"
    return _build(p, table, one, labels, name)


# ---------------------------------------------------------------------------
# Preset names
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]+)|(.))")


def _tokens(text: str) -> list[str]:
    out = []
    for number, word, other in _TOKEN.findall(text):
        tok = number or word or other
        if tok.strip():
            out.append(tok)
    return out


class _PresetParser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.toks = _tokens(text)
        self.pos = 0

    def _peek(self) -> str | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def _take(self, expected: str | None = None) -> str:
        tok = self._peek()
        if tok is None or (expected is not None and tok != expected):
            raise UnknownPreset(f"cannot parse preset {self.text!r}")
        self.pos += 1
        return tok

    def _int(self) -> int:
        tok = self._take()
        if not tok.isdigit():
            raise UnknownPreset(f"expected an integer in {self.text!r}, got {tok!r}")
        return int(tok)

    def parse(self) -> FiniteAlgebra:
        algebra = self._preset()
        if self._peek() is not None:
            raise UnknownPreset(f"trailing input in preset {self.text!r}")
        return algebra

    def _preset(self) -> FiniteAlgebra:
        name = self._take()
        builders = {"M": matrix_algebra, "T": upper_triangular, "FpC": cyclic_group_algebra}
        self._take("(")
        if name == "prod":
            factors = [self._preset()]
            while self._peek() == ",":
                self._take(",")
                factors.append(self._preset())
            self._take(")")
            return product_algebra(factors)
        if name not in builders:
            raise UnknownPreset(f"unknown preset {name!r}")
        n = self._int()
        self._take(",")
        p = self._int()
        self._take(")")
        return builders[name](n, p)


def catalog(name: str) -> FiniteAlgebra:
    """Build a preset ring from its name, e.g. ``"prod(M(2,2),T(2,2))"``."""
    return _PresetParser(name).parse()


# ---------------------------------------------------------------------------
# Oracles for matrix presets
# ---------------------------------------------------------------------------


def gl_order(n: int, q: int) -> int:
    """|GL_n(F_q)|."""
    order = 1
    for i in range(n):
        order *= q**n - q**i
    return order


def nilpotent_matrix_count(n: int, q: int) -> int:
    """Number of nilpotent n x n matrices over F_q (Fine-Herstein)."""
    return q ** (n * n - n)


# ---------------------------------------------------------------------------
# Element literals
# ---------------------------------------------------------------------------

_UNIT_LABEL = re.compile(r"^e(\d)(\d)$")
_TERM = re.compile(r"\s*([+-]?)\s*(?:(\d+)\s*\*\s*)?([^\s+\-*]+)\s*")


def jordan_block(R: FiniteAlgebra) -> Element:
    """J = e12 + e23 + ... for matrix and triangular presets."""
    diag = [label for label in R.labels if (m := _UNIT_LABEL.match(label)) and m[1] == m[2]]
    n = len(diag)
    superdiag = [f"e{i}{i + 1}" for i in range(1, n)]
    if n == 0 or any(label not in R.labels for label in superdiag):
        raise ElementSyntaxError(f"J is only defined for matrix presets, not {R.name}")
    coords = np.zeros(R.dim, dtype=np.int64)
    for label in superdiag:
        coords[R.labels.index(label)] = 1
    return R.element(coords)


def parse_element(R: FiniteAlgebra, text: str) -> Element:
    """Parse ``e12+2*e23``, ``[0,1,0,0]``, an integer, or ``J``."""
    text = text.strip()
    if not text:
        raise ElementSyntaxError("empty element expression")
    if text.startswith("["):
        if not text.endswith("]"):
            raise ElementSyntaxError(f"unterminated coordinate vector {text!r}")
        body = text[1:-1].strip()
        try:
            coords = [int(tok) for tok in body.split(",")] if body else []
        except ValueError as exc:
            raise ElementSyntaxError(f"bad coordinate vector {text!r}") from exc
        if len(coords) != R.dim:
            raise ElementSyntaxError(f"{R.name} needs {R.dim} coordinates, got {len(coords)}")
        return R.element(coords)

    total = R.zero()
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos:
            raise ElementSyntaxError(f"cannot parse {text!r} at column {pos + 1}")
        if pos > 0 and not m[1]:
            raise ElementSyntaxError(f"missing '+' before column {pos + 1} in {text!r}")
        sign = -1 if m[1] == "-" else 1
        scale = int(m[2]) if m[2] else 1
        token = m[3]
        if token in R.labels:
            term = R.basis_element(R.labels.index(token))
        elif token == "J":
            term = jordan_block(R)
        elif token.isdigit():
            term = R.identity() * int(token)
        else:
            raise ElementSyntaxError(f"unknown basis label {token!r} for {R.name}")
        total = total + term * (sign * scale)
        pos = m.end()
    return total
