"""Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`. Matrices are small immutable dense
row-major containers; all eliminations are done on integer rows (each row
cleared of denominators, which leaves its span unchanged) by the
fraction-free kernel in :mod:`apw._kernel` or its pure-Python twin.

Set ``APW_KERNEL=python`` to force the fallback.
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from . import _kernel_py

if os.environ.get("APW_KERNEL", "").lower() == "python":
    _kernel = _kernel_py
else:
    try:
        from . import _kernel  # type: ignore[attr-defined]
    except ImportError:
        _kernel = _kernel_py

BACKEND: str = _kernel.BACKEND

Vector = tuple  # tuple of Fraction


class InputError(ValueError):
    """Malformed arguments (dimension mismatch, out-of-range degree, ...)."""


class StructuralError(RuntimeError):
    """A computed object failed a structural assertion (e.g. socle dimension)."""


def as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Matrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable = ()):
        entries = tuple(as_fraction(x) for x in entries)
        if len(entries) != rows * cols:
            raise InputError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise InputError("ragged rows")
        return cls(len(rows), cols, (x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        for c in columns:
            if len(c) != rows:
                raise InputError("ragged columns")
        return cls(rows, len(columns), (columns[j][i] for i in range(rows) for j in range(len(columns))))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return self.entries[j::self.cols]

    def row_list(self) -> list[Vector]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix.from_rows([self.column(j) for j in range(self.cols)], self.rows)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise InputError("shape mismatch in product")
            ocols = [other.column(j) for j in range(other.cols)]
            return Matrix(self.rows, other.cols,
                          (sum((a * b for a, b in zip(self.row(i), oc)), Fraction(0))
                           for i in range(self.rows) for oc in ocols))
        v = tuple(other)
        if len(v) != self.cols:
            raise InputError("shape mismatch in matrix-vector product")
        return tuple(sum((a * b for a, b in zip(self.row(i), v)), Fraction(0)) for i in range(self.rows))

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols})"


def integer_row(row: Sequence) -> list[int]:
    """Scale a rational row by the lcm of its denominators."""
    den = 1
    for x in row:
        if isinstance(x, Fraction) and x.denominator != 1:
            den = lcm(den, x.denominator)
    if den == 1:
        return [int(x) for x in row]
    return [x.numerator * (den // x.denominator) if isinstance(x, Fraction) else int(x) * den for x in row]


def _int_rows(rows: Iterable[Sequence]) -> list[list[int]]:
    return [integer_row(r) for r in rows]


def rank_of_rows(rows: Iterable[Sequence], ncols: int) -> int:
    rows = _int_rows(rows)
    if not rows or ncols == 0:
        return 0
    return _kernel.rank_int(rows, ncols)


def rank(m: Matrix) -> int:
    return rank_of_rows(m.row_list(), m.cols)


def rref_rows(rows: Iterable[Sequence], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Integer reduced echelon form of the row span, plus pivot columns."""
    rows = _int_rows(rows)
    if not rows or ncols == 0:
        return [], []
    return _kernel.rref_int(rows, ncols)


def kernel_basis(m: Matrix) -> list[Vector]:
    """Basis of the right null space {v : m v = 0}, one vector per free column."""
    echelon, pivots = rref_rows(m.row_list(), m.cols)
    pivset = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivset:
            continue
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, p in zip(echelon, pivots):
            if row[f]:
                v[p] = Fraction(-row[f], row[p])
        basis.append(tuple(v))
    return basis


def left_kernel_basis(m: Matrix) -> list[Vector]:
    return kernel_basis(m.transpose())


def solve(m: Matrix, b: Sequence) -> Vector | None:
    """Some x with m x = b, or None when the system is inconsistent."""
    b = [as_fraction(x) for x in b]
    if len(b) != m.rows:
        raise InputError(f"right-hand side has length {len(b)}, matrix has {m.rows} rows")
    aug = [list(m.row(i)) + [b[i]] for i in range(m.rows)]
    echelon, pivots = rref_rows(aug, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for row, p in zip(echelon, pivots):
        x[p] = Fraction(row[m.cols], row[p])
    return tuple(x)


def subspace_dim_sum(a: Matrix, b: Matrix) -> tuple[int, int, int, int]:
    """(dim A, dim B, dim(A+B), dim(A∩B)) for the row spans of a and b."""
    if a.cols != b.cols:
        raise InputError(f"ambient mismatch: {a.cols} vs {b.cols}")
    da, db = rank(a), rank(b)
    ds = rank_of_rows(a.row_list() + b.row_list(), a.cols)
    return da, db, ds, da + db - ds


def span_contains(basis_rows: Sequence[Sequence], vectors: Sequence[Sequence], ncols: int) -> bool:
    """True iff every vector lies in the span of basis_rows."""
    base = rank_of_rows(basis_rows, ncols)
    return rank_of_rows(list(basis_rows) + list(vectors), ncols) == base


class Reducer:
    """Normal forms modulo a fixed subspace of Q^n.

    Reducing a vector subtracts multiples of the reduced echelon basis so
    that it vanishes on every pivot coordinate; two vectors are congruent
    modulo the subspace iff their normal forms coincide.
    """

    def __init__(self, rows: Iterable[Sequence], ncols: int):
        self.ncols = ncols
        echelon, pivots = rref_rows(list(rows), ncols)
        self.pivots = pivots
        self.dim = len(pivots)
        self._rows = [[Fraction(x, row[p]) for x in row] for row, p in zip(echelon, pivots)]
        pivset = set(pivots)
        self.free = [j for j in range(ncols) if j not in pivset]

    def reduce(self, v: Sequence) -> list[Fraction]:
        v = [as_fraction(x) for x in v]
        for row, p in zip(self._rows, self.pivots):
            c = v[p]
            if c:
                v = [x - c * y for x, y in zip(v, row)]
        return v

    def reduce_free(self, v: Sequence) -> list[Fraction]:
        """Normal form restricted to the non-pivot coordinates."""
        w = self.reduce(v)
        return [w[j] for j in self.free]


class SparseSpan:
    """Incrementally built echelon basis of sparse vectors ``{column: value}``.

    Each stored row has its pivot as leading (smallest) column with value 1.
    Suited to ideals spanned by monomials and binomials, where dense
    elimination would waste nearly all its work on zeros.
    """

    def __init__(self, vectors: Iterable[dict] = ()):
        self.rows: dict[int, dict[int, Fraction]] = {}
        for v in vectors:
            self.add(v)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _eliminate_leading(self, v: dict) -> dict:
        v = {k: as_fraction(x) for k, x in v.items() if x}
        rows = self.rows
        while v:
            p = min(v)
            row = rows.get(p)
            if row is None:
                return v
            c = v[p]
            for k, x in row.items():
                y = v.get(k, 0) - c * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
        return v

    def add(self, v: dict) -> bool:
        """Insert v; return True if the span grew."""
        w = self._eliminate_leading(v)
        if not w:
            return False
        p = min(w)
        c = w[p]
        self.rows[p] = {k: x / c for k, x in w.items()}
        return True

    def contains(self, v: dict) -> bool:
        return not self._eliminate_leading(v)

    def normal_form(self, v: dict) -> dict:
        """Canonical representative of v modulo the span (no pivot columns)."""
        v = {k: as_fraction(x) for k, x in v.items() if x}
        out = {}
        rows = self.rows
        while v:
            p = min(v)
            c = v.pop(p)
            row = rows.get(p)
            if row is None:
                out[p] = c
                continue
            for k, x in row.items():
                if k == p:
                    continue
                y = v.get(k, 0) - c * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
        return out

    def basis(self) -> list[dict]:
        return [self.rows[p] for p in sorted(self.rows)]
