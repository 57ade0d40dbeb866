"""Cox-ring monomial bases for Hirzebruch surfaces and the projective plane.

Hirzebruch surface F_e: Cox variables (t0, t1, u, v) with
deg t0 = deg t1 = f, deg u = C0, deg v = C0 + e f. The sections of aC0 + bf
are the monomials u^(a-k) v^k t^beta with |beta| = b - k e, k = 0..a.

Plane: Cox variables (y0, y1, y2), the sections of O(d) are the degree-d
monomials.

Cox polynomials are :class:`apw.poly.Poly` objects with ring tag ``'y'``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import InputError, Matrix, Reducer
from .poly import Poly, mono_mul, monomials

HIRZEBRUCH = "hirzebruch"
PLANE = "plane"
COX_RING = "y"


@dataclass(frozen=True)
class CoxBasis:
    kind: str
    e: int | None
    klass: tuple[int, ...]
    monomials: tuple[tuple[int, ...], ...]
    index: dict = field(compare=False, repr=False, hash=False)

    @property
    def nvars(self) -> int:
        return 4 if self.kind == HIRZEBRUCH else 3

    def __len__(self):
        return len(self.monomials)

    def coordinates(self, p: Poly) -> list[Fraction]:
        v = [Fraction(0)] * len(self.monomials)
        for m, c in p.terms.items():
            i = self.index.get(m)
            if i is None:
                raise InputError(f"Cox monomial {m} is not a section of class {self.klass}")
            v[i] = c
        return v

    def poly(self, coords: Sequence) -> Poly:
        return Poly(self.nvars, {m: c for m, c in zip(self.monomials, coords) if c}, COX_RING)


def hirzebruch_basis(e: int, a: int, b: int) -> CoxBasis:
    if e < 0:
        raise InputError("e must be non-negative")
    if a < 0:
        raise InputError(f"negative C0-coefficient {a} has no sections")
    mons = []
    for k in range(a + 1):
        tdeg = b - k * e
        for i in range(tdeg + 1):
            mons.append((tdeg - i, i, a - k, k))
    mons = tuple(mons)
    return CoxBasis(HIRZEBRUCH, e, (a, b), mons, {m: i for i, m in enumerate(mons)})


def plane_basis(d: int) -> CoxBasis:
    if d < 0:
        raise InputError("negative plane degree")
    mons = monomials(3, d)
    return CoxBasis(PLANE, None, (d,), mons, {m: i for i, m in enumerate(mons)})


def cox_basis(kind, klass) -> CoxBasis:
    """``cox_basis(('hirzebruch', e), (a, b))`` or ``cox_basis('plane', d)``."""
    if isinstance(kind, tuple):
        kind, e = kind
    else:
        e = None
    if kind == HIRZEBRUCH:
        a, b = klass
        return hirzebruch_basis(e, a, b)
    if kind == PLANE:
        d = klass[0] if isinstance(klass, tuple) else klass
        return plane_basis(d)
    raise InputError(f"unknown surface kind {kind!r}")


def monomial_class(kind: str, e: int | None, m: Sequence[int]) -> tuple[int, ...]:
    if kind == HIRZEBRUCH:
        t0, t1, u, v = m
        return (u + v, t0 + t1 + e * v)
    return (sum(m),)


def poly_class(kind: str, e: int | None, g: Poly) -> tuple[int, ...]:
    classes = {monomial_class(kind, e, m) for m in g.terms}
    if len(classes) != 1:
        raise InputError("Cox polynomial is not homogeneous for the class grading")
    return classes.pop()


def class_sub(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def basis_of_class(kind: str, e: int | None, klass: tuple) -> CoxBasis | None:
    """Section basis, or None when the class has no sections (negative part)."""
    if kind == HIRZEBRUCH:
        if klass[0] < 0:
            return None
        return hirzebruch_basis(e, *klass)
    if klass[0] < 0:
        return None
    return plane_basis(klass[0])


class CoxQuotient:
    """Coordinates for sections of a class modulo g * (sections of class - [g])."""

    def __init__(self, target: CoxBasis, modulus: Poly | None = None,
                 extra: Iterable[Poly] = ()):
        self.target = target
        rows = []
        if modulus is not None and not modulus.is_zero():
            gk = poly_class(target.kind, target.e, modulus)
            comp = basis_of_class(target.kind, target.e, class_sub(target.klass, gk))
            if comp is not None:
                for m in comp.monomials:
                    rows.append(target.coordinates(modulus * Poly(target.nvars, {m: 1}, COX_RING)))
        for p in extra:
            rows.append(target.coordinates(p))
        self.reducer = Reducer(rows, len(target))

    @property
    def modulus_dim(self) -> int:
        return self.reducer.dim

    def reduce(self, p: Poly) -> list[Fraction]:
        return self.reducer.reduce(self.target.coordinates(p))

    def reduce_monomial(self, m: Sequence[int]) -> list[Fraction]:
        i = self.target.index.get(tuple(m))
        if i is None:
            raise InputError(f"product {tuple(m)} does not lie in class {self.target.klass}")
        v = [Fraction(0)] * len(self.target)
        v[i] = Fraction(1)
        return self.reducer.reduce(v)


def multiply_monomials(factors: Iterable[Sequence[int]], nvars: int) -> tuple[int, ...]:
    out = (0,) * nvars
    for f in factors:
        out = mono_mul(out, tuple(f))
    return out


def cox_multiply_and_reduce(products: Sequence[Sequence[Sequence[int]]], target: CoxBasis,
                            modulus: Poly | None = None) -> Matrix:
    """Columns = products of Cox monomials in the target basis, in normal form
    modulo ``modulus`` times the complementary sections."""
    q = CoxQuotient(target, modulus)
    cols = [q.reduce_monomial(multiply_monomials(pr, target.nvars)) for pr in products]
    return Matrix.from_columns(cols, len(target))
