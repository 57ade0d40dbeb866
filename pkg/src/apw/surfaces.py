"""Divisors on Hirzebruch surfaces and the surfaces of minimal degree.

Classes are integer pairs (a, b) meaning aC0 + bf on F_e, with
C0^2 = -e, C0.f = 1, f^2 = 0 and canonical class -2C0 - (2+e)f.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

from .cox import CoxBasis, hirzebruch_basis, plane_basis
from .linalg import InputError, Matrix, kernel_basis
from .poly import GradedBasis, Poly, monomials, mono_mul


@dataclass(frozen=True)
class DivisorClass:
    e: int
    a: int
    b: int

    def _same(self, other: "DivisorClass"):
        if self.e != other.e:
            raise InputError(f"classes live on F_{self.e} and F_{other.e}")

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._same(other)
        return DivisorClass(self.e, self.a + other.a, self.b + other.b)

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._same(other)
        return DivisorClass(self.e, self.a - other.a, self.b - other.b)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(self.e, -self.a, -self.b)

    def __mul__(self, k: int) -> "DivisorClass":
        return DivisorClass(self.e, k * self.a, k * self.b)

    __rmul__ = __mul__

    def __str__(self):
        return f"{self.a}C0{self.b:+d}f"

    @property
    def pair(self) -> tuple[int, int]:
        return (self.a, self.b)


def intersect(d1: DivisorClass, d2: DivisorClass) -> int:
    d1._same(d2)
    return d1.a * d2.b + d2.a * d1.b - d1.e * d1.a * d2.a


def canonical_class(e: int) -> DivisorClass:
    if e < 0:
        raise InputError("e must be non-negative")
    return DivisorClass(e, -2, -2 - e)


def adjunction_genus(D: DivisorClass) -> int:
    """Arithmetic genus 1 + D.(D+K)/2 of a curve in |D|."""
    t = intersect(D, D + canonical_class(D.e))
    if t % 2:
        raise InputError("D.(D+K) is odd")
    return 1 + t // 2


def hyperplane_class(a1: int, a2: int) -> DivisorClass:
    return DivisorClass(a1 - a2, 1, a1)


def subcanonical_class(s: int, a1: int, a2: int) -> DivisorClass:
    """(s+2)C0 + ((s+1)a1 - a2 + 2)f on F_{a1-a2}."""
    if not a1 >= a2 >= 0:
        raise InputError("requires a1 >= a2 >= 0")
    return DivisorClass(a1 - a2, s + 2, (s + 1) * a1 - a2 + 2)


def is_very_ample(D: DivisorClass) -> bool:
    return D.a > 0 and D.b > D.a * D.e


def smoothness_window(s: int, a1: int, a2: int) -> str | None:
    """Name of the violated inequality, or None inside the window."""
    if a2 < 0:
        return "requires a2 >= 0"
    if a1 < a2:
        return "requires a2 <= a1"
    if a1 > (s + 1) * a2 + 2:
        return "requires a1 <= (s+1)a2+2"
    return None


@dataclass(frozen=True)
class CurveInvariants:
    klass: DivisorClass
    genus: int
    degree: int
    ambient_dim: int
    smooth_ok: bool
    very_ample_ok: bool
    gonality_pencil_degree: int


def curve_invariants(s: int, a1: int, a2: int) -> CurveInvariants:
    C = subcanonical_class(s, a1, a2)
    H = hyperplane_class(a1, a2)
    num = (s + 1) * (s * (a1 + a2) + 2)
    genus = num // 2
    degree = (s + 1) * (a1 + a2) + 2
    assert num % 2 == 0
    assert genus == adjunction_genus(C), "genus formula disagrees with adjunction"
    assert degree == intersect(C, H)
    return CurveInvariants(
        klass=C,
        genus=genus,
        degree=degree,
        ambient_dim=a1 + a2 + 1,
        smooth_ok=(s + 1) * a2 + 2 >= a1,
        very_ample_ok=is_very_ample(C),
        gonality_pencil_degree=intersect(C, DivisorClass(C.e, 0, 1)),
    )


def _h0(e: int, a: int, b: int) -> int:
    if a < 0:
        return 0
    return sum(max(0, b - k * e + 1) for k in range(a + 1))


def line_bundle_cohomology(e: int, D: DivisorClass | tuple) -> tuple[int, int, int]:
    """(h0, h1, h2) of O(D) on F_e; h2 by Serre duality, h1 from Riemann-Roch."""
    if not isinstance(D, DivisorClass):
        D = DivisorClass(e, *D)
    if D.e != e:
        raise InputError("class lives on a different surface")
    K = canonical_class(e)
    h0 = _h0(e, D.a, D.b)
    KD = K - D
    h2 = _h0(e, KD.a, KD.b)
    chi = 1 + intersect(D, D - K) // 2
    h1 = h0 + h2 - chi
    if min(h0, h1, h2) < 0:
        raise AssertionError(f"negative cohomology for {D} on F_{e}: {(h0, h1, h2)}")
    return h0, h1, h2


def plane_cohomology(k: int) -> tuple[int, int, int]:
    """(h0, h1, h2) of O(k) on the projective plane."""
    h0 = comb(k + 2, 2) if k >= 0 else 0
    h2 = comb(-k - 1, 2) if k <= -3 else 0
    return h0, 0, h2


# -- embeddings -------------------------------------------------------------

SCROLL = "scroll"
VERONESE = "veronese"


@dataclass(frozen=True)
class SurfaceEmbedding:
    """A scroll S(a1, a2) or a Veronese surface v_m(P^2) in P^N.

    The ambient coordinates are indexed by the embedding's Cox basis: the
    i-th ambient variable pulls back to the i-th basis monomial.
    """

    kind: str
    params: tuple[int, ...]
    basis: CoxBasis

    @property
    def N(self) -> int:
        return len(self.basis) - 1

    @property
    def e(self) -> int | None:
        return self.basis.e

    @property
    def degree(self) -> int:
        if self.kind == SCROLL:
            return sum(self.params)
        return self.params[0] ** 2

    @property
    def cox_kind(self) -> str:
        return self.basis.kind

    def hyperplane(self) -> tuple[int, ...]:
        return self.basis.klass

    def class_multiple(self, j: int) -> tuple[int, ...]:
        return tuple(j * x for x in self.basis.klass)

    def basis_of(self, klass: tuple[int, ...]) -> CoxBasis | None:
        if klass[0] < 0:
            return None
        if self.kind == SCROLL:
            return hirzebruch_basis(self.e, *klass)
        return plane_basis(klass[0])

    def section_basis(self, j: int) -> CoxBasis:
        return self.basis_of(self.class_multiple(j))

    def image_monomial(self, m: Sequence[int]) -> tuple[int, ...]:
        """Cox monomial that the ambient monomial x^m pulls back to."""
        out = (0,) * self.basis.nvars
        for i, k in enumerate(m):
            if k:
                out = mono_mul(out, tuple(k * x for x in self.basis.monomials[i]))
        return out

    def pullback(self, p: Poly) -> Poly:
        """Cox polynomial of an ambient polynomial."""
        t: dict = {}
        for m, c in p.terms.items():
            im = self.image_monomial(m)
            t[im] = t.get(im, 0) + c
        return Poly(self.basis.nvars, t, "y")

    def evaluate_point(self, cox_point: Sequence) -> tuple:
        """Ambient coordinates of the surface point with the given Cox coordinates."""
        return tuple(Poly(self.basis.nvars, {m: 1}, "y").evaluate(cox_point) for m in self.basis.monomials)

    def __str__(self):
        if self.kind == SCROLL:
            return f"S({self.params[0]},{self.params[1]}) in P^{self.N}"
        return f"v_{self.params[0]}(P^2) in P^{self.N}"


def build_embedding(kind: str, *params: int) -> SurfaceEmbedding:
    """``build_embedding('scroll', a1, a2)`` or ``build_embedding('veronese', m)``."""
    if kind == SCROLL:
        a1, a2 = params
        if not (a1 >= a2 >= 0 and a1 + a2 >= 1):
            raise InputError("scroll needs a1 >= a2 >= 0 and a1 + a2 >= 1")
        emb = SurfaceEmbedding(SCROLL, (a1, a2), hirzebruch_basis(a1 - a2, 1, a1))
        assert emb.N == a1 + a2 + 1
    elif kind == VERONESE:
        (m,) = params
        if m < 1:
            raise InputError("Veronese degree must be positive")
        emb = SurfaceEmbedding(VERONESE, (m,), plane_basis(m))
        assert emb.N == comb(m + 2, 2) - 1
    else:
        raise InputError(f"unknown surface kind {kind!r}")
    return emb


def sym_images(S: SurfaceEmbedding, j: int) -> tuple[list[tuple], list[tuple]]:
    """Ambient degree-j monomials and the Cox monomials they pull back to."""
    mons = monomials(S.N + 1, j)
    return list(mons), [S.image_monomial(m) for m in mons]


def surface_ideal_piece(S: SurfaceEmbedding, j: int) -> list[Poly]:
    """Basis of I(S)_j: kernel of Sym^j(ambient linear forms) -> sections of jH."""
    if j < 1:
        raise InputError("degree must be positive")
    mons, images = sym_images(S, j)
    target = S.section_basis(j)
    cols = []
    for im in images:
        col = [0] * len(target)
        col[target.index[im]] = 1
        cols.append(col)
    ker = kernel_basis(Matrix.from_columns(cols, len(target)))
    basis = GradedBasis(S.N + 1, j)
    return [basis.poly(v, "d") for v in ker]
