"""Apolar ideals, Artinian Gorenstein quotients and Fermat detection.

All ideals are handled degreewise as finite-dimensional subspaces of the
graded pieces T_e of the operator ring, never through Groebner bases.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .linalg import (InputError, Matrix, SparseSpan, StructuralError, kernel_basis,
                     rank, solve)
from .poly import (GradedBasis, LinearFormPoint, Poly, apolar_apply, catalecticant,
                   monomial_index, monomials, multifactorial, power_of_linear_form)
from . import univariate

log = logging.getLogger(__name__)

FERMAT_RETRIES = 8


# -- sparse coordinates -----------------------------------------------------

def poly_to_sparse(p: Poly) -> dict[int, Fraction]:
    """Coordinates of a homogeneous polynomial in the graded monomial basis."""
    if p.is_zero():
        return {}
    idx = monomial_index(p.nvars, p.degree())
    return {idx[m]: c for m, c in p.terms.items()}


def sparse_to_poly(v: dict, nvars: int, degree: int, ring: str = "d") -> Poly:
    mons = monomials(nvars, degree)
    return Poly(nvars, {mons[k]: c for k, c in v.items()}, ring)


def span_of(polys: Iterable[Poly]) -> SparseSpan:
    return SparseSpan(poly_to_sparse(p) for p in polys)


def same_span(a: Sequence[Poly], b: Sequence[Poly]) -> bool:
    sa = span_of(a)
    if sa.dim != span_of(b).dim:
        return False
    return all(sa.contains(poly_to_sparse(p)) for p in b)


def expand_ideal(generators: Iterable[Poly], nvars: int, max_degree: int) -> dict[int, SparseSpan]:
    """Degreewise spans J_e, 0 <= e <= max_degree, of the ideal generated.

    Uses J_e = T_1 J_{e-1} + (generators of degree e).
    """
    by_degree: dict[int, list[Poly]] = {}
    for g in generators:
        if g.is_zero():
            continue
        if not g.is_homogeneous():
            raise InputError("ideal generators must be homogeneous")
        by_degree.setdefault(g.degree(), []).append(g)
    out: dict[int, SparseSpan] = {}
    prev: SparseSpan | None = None
    for e in range(max_degree + 1):
        span = SparseSpan()
        if prev is not None and prev.dim:
            src = monomials(nvars, e - 1)
            idx = monomial_index(nvars, e)
            for row in prev.basis():
                for i in range(nvars):
                    w = {}
                    for k, c in row.items():
                        m = list(src[k])
                        m[i] += 1
                        w[idx[tuple(m)]] = c
                    span.add(w)
        for g in by_degree.get(e, ()):
            span.add(poly_to_sparse(g))
        out[e] = span
        prev = span
    return out


# -- apolar ideals ----------------------------------------------------------

@dataclass
class ApolarIdeal:
    """Degreewise bases of F-perp for 1 <= e <= d; everything above d is in."""

    nvars: int
    socle_degree: int
    pieces: dict[int, list[Poly]]

    def piece(self, e: int) -> list[Poly]:
        if e <= 0:
            return []
        if e > self.socle_degree:
            return [Poly(self.nvars, {m: 1}, "d") for m in monomials(self.nvars, e)]
        return self.pieces[e]

    def dim(self, e: int) -> int:
        if e <= 0:
            return 0
        if e > self.socle_degree:
            return comb(self.nvars - 1 + e, e)
        return len(self.pieces[e])

    def hilbert_function(self) -> list[int]:
        return [comb(self.nvars - 1 + e, e) - self.dim(e) for e in range(self.socle_degree + 1)]

    def same_as(self, other: "ApolarIdeal") -> bool:
        """Degreewise equality as subspaces."""
        if self.nvars != other.nvars or self.socle_degree != other.socle_degree:
            return False
        return all(same_span(self.pieces[e], other.pieces[e]) for e in range(1, self.socle_degree + 1))


def perp(f: Poly) -> ApolarIdeal:
    """F-perp degreewise: (F-perp)_e is the kernel of the degree-e catalecticant."""
    if f.is_zero():
        raise InputError("the zero polynomial has no apolar ideal")
    if not f.is_homogeneous():
        raise InputError("apolar ideal needs a homogeneous form")
    d = f.degree()
    if d < 1:
        raise InputError("form must have positive degree")
    pieces = {}
    for e in range(1, d + 1):
        basis = GradedBasis(f.nvars, e)
        pieces[e] = [basis.poly(v, "d") for v in kernel_basis(catalecticant(f, e))]
    ideal = ApolarIdeal(f.nvars, d, pieces)
    if ideal.dim(d) != comb(f.nvars - 1 + d, d) - 1:
        raise StructuralError("socle of A^F is not one-dimensional")
    return ideal


def hilbert_function(x: Poly | ApolarIdeal) -> list[int]:
    """HF(e) of A^F = rank of the degree-e catalecticant, e = 0..d."""
    if isinstance(x, ApolarIdeal):
        return x.hilbert_function()
    if x.is_zero() or not x.is_homogeneous():
        raise InputError("hilbert_function needs a nonzero homogeneous form")
    return [rank(catalecticant(x, e)) for e in range(x.degree() + 1)]


def minimal_generators(ideal: ApolarIdeal) -> dict[int, list[Poly]]:
    """Minimal generators by degree, up to degree d+1.

    Degree-e generators span a complement of T_1 * I_{e-1} inside I_e.
    """
    r, d = ideal.nvars, ideal.socle_degree
    out: dict[int, list[Poly]] = {}
    prev_basis: list[Poly] = []
    for e in range(1, d + 2):
        lower = expand_ideal(prev_basis, r, e)[e] if prev_basis else SparseSpan()
        gens = []
        for p in ideal.piece(e):
            if lower.add(poly_to_sparse(p)):
                gens.append(p)
        if gens:
            out[e] = gens
        prev_basis = ideal.piece(e)
    return out


def fermat_perp(r: int, d: int) -> ApolarIdeal:
    """Ideal generated by d_i d_j and d_i^d - d_j^d (i < j), up to degree d."""
    if r < 1 or d < 2:
        raise InputError("fermat_perp needs r >= 1 and d >= 2")
    gens = []
    for i in range(r):
        for j in range(i + 1, r):
            m = [0] * r
            m[i] += 1
            m[j] += 1
            gens.append(Poly(r, {tuple(m): 1}, "d"))
            pi = [0] * r
            pj = [0] * r
            pi[i] = d
            pj[j] = d
            gens.append(Poly(r, {tuple(pi): 1, tuple(pj): -1}, "d"))
    spans = expand_ideal(gens, r, d)
    pieces = {e: [sparse_to_poly(v, r, e) for v in spans[e].basis()] for e in range(1, d + 1)}
    return ApolarIdeal(r, d, pieces)


# -- Artinian Gorenstein quotients ------------------------------------------

@dataclass
class ArtinianGorenstein:
    """A graded quotient T/I with one-dimensional socle.

    ``standard[e]`` lists the monomials of T_e outside the pivot set of I_e;
    their classes form a basis of A_e. The socle functional maps an operator
    of degree d to its coordinate in A_d.
    """

    nvars: int
    socle_degree: int
    hilbert: list[int]
    standard: dict[int, list[tuple]]
    socle_functional: dict[tuple, Fraction]
    ideal: dict[int, SparseSpan] = field(repr=False)

    @classmethod
    def from_ideal(cls, nvars: int, ideal: dict[int, SparseSpan], top: int) -> "ArtinianGorenstein":
        """Build from degreewise spans for 0 <= e <= top (I_e = T_e assumed above top)."""
        hf = [comb(nvars - 1 + e, e) - ideal[e].dim for e in range(top + 1)]
        nz = [e for e, h in enumerate(hf) if h]
        if not nz:
            raise StructuralError("quotient is zero")
        d = max(nz)
        if d == top:
            raise StructuralError(f"quotient does not vanish by degree {top}")
        if hf[d] != 1:
            raise StructuralError(f"socle dimension {hf[d]} in top degree {d}")
        standard = {}
        for e in range(d + 1):
            pivots = ideal[e].rows
            mons = monomials(nvars, e)
            standard[e] = [mons[k] for k in range(len(mons)) if k not in pivots]
        # no socle below the top degree
        for e in range(d):
            cols = []
            idx_next = monomial_index(nvars, e + 1)
            std_next = {monomial_index(nvars, e + 1)[m]: j for j, m in enumerate(standard[e + 1])}
            for m in standard[e]:
                col = []
                for i in range(nvars):
                    mm = list(m)
                    mm[i] += 1
                    nf = ideal[e + 1].normal_form({idx_next[tuple(mm)]: 1})
                    block = [Fraction(0)] * len(std_next)
                    for k, c in nf.items():
                        block[std_next[k]] = c
                    col.extend(block)
                cols.append(col)
            if cols and rank(Matrix.from_columns(cols, nvars * len(std_next))) != len(cols):
                raise StructuralError(f"socle element in degree {e}")
        top_mon = monomial_index(nvars, d)[standard[d][0]]
        functional = {}
        for k, m in enumerate(monomials(nvars, d)):
            nf = ideal[d].normal_form({k: 1})
            c = nf.get(top_mon, Fraction(0))
            if c:
                functional[m] = c
        return cls(nvars, d, hf[:d + 1], standard, functional, ideal)

    def ideal_piece(self, e: int) -> list[Poly]:
        if e > self.socle_degree:
            return [Poly(self.nvars, {m: 1}, "d") for m in monomials(self.nvars, e)]
        return [sparse_to_poly(v, self.nvars, e) for v in self.ideal[e].basis()]

    def as_apolar_ideal(self) -> ApolarIdeal:
        return ApolarIdeal(self.nvars, self.socle_degree,
                           {e: self.ideal_piece(e) for e in range(1, self.socle_degree + 1)})


def quotient_by_perp(f: Poly) -> ArtinianGorenstein:
    I = perp(f)
    d = I.socle_degree
    spans = {0: SparseSpan()}
    for e in range(1, d + 1):
        spans[e] = span_of(I.pieces[e])
    spans[d + 1] = SparseSpan({k: 1} for k in range(comb(f.nvars + d, d + 1)))
    return ArtinianGorenstein.from_ideal(f.nvars, spans, d + 1)


def quotient_by_generators(generators: Sequence[Poly], nvars: int, cap: int) -> ArtinianGorenstein:
    return ArtinianGorenstein.from_ideal(nvars, expand_ideal(generators, nvars, cap), cap)


def dual_socle_generator(A: ArtinianGorenstein) -> Poly:
    """The Macaulay dual form F = sum phi(d^m)/m! x^m, first coefficient 1."""
    if A.hilbert[A.socle_degree] != 1:
        raise StructuralError("socle dimension is not one")
    F = Poly(A.nvars, {m: c / multifactorial(m) for m, c in A.socle_functional.items()}, "x")
    return F.normalized()


# -- points and the Apolarity Lemma -----------------------------------------

def _as_points(points: Sequence) -> list[LinearFormPoint]:
    pts = [p if isinstance(p, LinearFormPoint) else LinearFormPoint(p) for p in points]
    if not pts:
        raise InputError("need at least one point")
    if len(set(pts)) != len(pts):
        raise InputError("duplicate points")
    if len({p.nvars for p in pts}) != 1:
        raise InputError("points live in different spaces")
    return pts


def ideal_of_points(points: Sequence, e: int) -> list[Poly]:
    """Basis of I(Gamma)_e: operators of degree e vanishing at every point."""
    pts = _as_points(points)
    n = pts[0].nvars
    mons = monomials(n, e)
    rows = []
    for p in pts:
        row = []
        for m in mons:
            v = Fraction(1)
            for c, k in zip(p.coords, m):
                if k:
                    v *= c ** k
            row.append(v)
        rows.append(row)
    basis = GradedBasis(n, e)
    return [basis.poly(v, "d") for v in kernel_basis(Matrix.from_rows(rows, len(mons)))]


@dataclass
class ApolarityCertificate:
    apolar: bool
    failed_degree: int | None = None

    def __bool__(self):
        return self.apolar


def is_apolar_scheme(points: Sequence, f: Poly) -> ApolarityCertificate:
    """I(Gamma)_e inside (F-perp)_e for 1 <= e <= deg f."""
    pts = _as_points(points)
    if pts[0].nvars != f.nvars:
        raise InputError("points and form have different numbers of variables")
    for e in range(1, f.degree() + 1):
        for D in ideal_of_points(pts, e):
            if not apolar_apply(D, f).is_zero():
                return ApolarityCertificate(False, e)
    return ApolarityCertificate(True)


def waring_from_points(points: Sequence, f: Poly) -> tuple[Fraction, ...] | None:
    """Solve f = sum lambda_i l_i^d exactly; None when inconsistent."""
    pts = _as_points(points)
    d = f.degree()
    if pts[0].nvars != f.nvars:
        raise InputError("points and form have different numbers of variables")
    basis = GradedBasis(f.nvars, d)
    cols = [basis.coordinates(power_of_linear_form(p, d)) for p in pts]
    return solve(Matrix.from_columns(cols, len(basis)), basis.coordinates(f))


def waring_rank_lower_bound(f: Poly) -> int:
    return max(hilbert_function(f))


# -- Fermat detection -------------------------------------------------------

CERTIFIED_FERMAT = "CertifiedFermat"
CERTIFIED_NOT = "CertifiedNot"
UNDETERMINED = "Undetermined"

W_DEGENERATE = "degenerate-variables"
W_QUADRIC_COUNT = "quadric-count"
W_LOCUS_LENGTH = "quadric-locus-length"
W_NON_REDUCED = "non-reduced"


@dataclass
class FermatVerdict:
    tag: str
    form: Poly
    witness: str | None = None
    points: list[LinearFormPoint] | None = None
    lambdas: list[Fraction] | None = None
    minimal_polynomial: list[Fraction] | None = None  # coefficients, highest degree first
    irrational: bool = False
    reason: str | None = None
    operators: tuple | None = field(default=None, repr=False)  # (l, l') used in step 3

    @property
    def is_fermat(self) -> bool:
        return self.tag == CERTIFIED_FERMAT

    def verify(self) -> bool:
        """Recheck the stored certificate from scratch."""
        f = self.form
        r, d = f.nvars, f.degree()
        if self.tag == CERTIFIED_FERMAT and self.points is not None:
            if len(self.points) != r or any(l == 0 for l in self.lambdas):
                return False
            total = Poly(r, {}, "x")
            for p, l in zip(self.points, self.lambdas):
                total = total + power_of_linear_form(p, d) * l
            return total == f
        if self.tag == CERTIFIED_FERMAT:
            mp = self.minimal_polynomial
            return (_quadric_stage(f) is None and mp is not None
                    and len(mp) == r + 1 and univariate.is_squarefree(mp))
        if self.tag == CERTIFIED_NOT:
            stage = _quadric_stage(f)
            if self.witness == W_NON_REDUCED:
                if stage is not None:
                    return False
                l, l2 = self.operators
                M = _multiplication_operator(f, l, l2)
                return M is not None and not univariate.is_squarefree(univariate.minimal_polynomial(M))
            return stage is not None and stage[0] == self.witness
        return True

    def to_json(self) -> dict:
        out: dict = {"tag": self.tag}
        if self.tag == CERTIFIED_NOT:
            out["witness"] = self.witness
        elif self.tag == CERTIFIED_FERMAT:
            if self.points is not None:
                out["points"] = [[str(c) for c in p.coords] for p in self.points]
                out["lambdas"] = [str(l) for l in self.lambdas]
            else:
                out["irrational"] = True
                out["minimal_polynomial"] = [str(c) for c in self.minimal_polynomial]
        else:
            out["reason"] = self.reason
        return out


def _quadric_span(f: Poly) -> tuple[int, list[Poly]]:
    """(dim (F-perp)_1, basis of (F-perp)_2)."""
    k1 = kernel_basis(catalecticant(f, 1))
    b2 = GradedBasis(f.nvars, 2)
    q = [b2.poly(v, "d") for v in kernel_basis(catalecticant(f, 2))]
    return len(k1), q


def _quadric_stage(f: Poly):
    """Steps 0-2: returns (witness, detail) on failure, None when all pass."""
    r, d = f.nvars, f.degree()
    n1, quadrics = _quadric_span(f)
    if n1:
        return W_DEGENERATE, f"(F-perp)_1 has dimension {n1}"
    if len(quadrics) != comb(r, 2):
        return W_QUADRIC_COUNT, f"dim (F-perp)_2 = {len(quadrics)}, expected {comb(r, 2)}"
    J = expand_ideal(quadrics, r, d + 1)
    for e in range(1, d + 2):
        h = comb(r - 1 + e, e) - J[e].dim
        if h != r:
            return W_LOCUS_LENGTH, f"HF(T/J)({e}) = {h}, expected {r}"
    return None


def _multiplication_operator(f: Poly, l: Sequence, l2: Sequence) -> Matrix | None:
    """M = M_{l2}^{-1} M_l on B_1 = T_1, where B = T/(F-perp)_2 T; None if M_{l2} singular."""
    r = f.nvars
    _, quadrics = _quadric_span(f)
    J2 = span_of(quadrics)
    idx2 = monomial_index(r, 2)
    free = [k for k in range(len(idx2)) if k not in J2.rows]
    pos = {k: j for j, k in enumerate(free)}

    def mult(lin):
        cols = []
        for i in range(r):
            v: dict = {}
            for j, c in enumerate(lin):
                if c:
                    m = [0] * r
                    m[i] += 1
                    m[j] += 1
                    k = idx2[tuple(m)]
                    v[k] = v.get(k, 0) + Fraction(c)
            nf = J2.normal_form(v)
            col = [Fraction(0)] * len(free)
            for k, c in nf.items():
                col[pos[k]] = c
            cols.append(col)
        return Matrix.from_columns(cols, len(free))

    Ml, Ml2 = mult(l), mult(l2)
    if Ml2.rows != r or rank(Ml2) != r:
        return None
    cols = []
    for j in range(r):
        x = solve(Ml2, Ml.column(j))
        cols.append(x)
    return Matrix.from_columns(cols, r)


def _random_linear(rng: random.Random, r: int) -> list[int]:
    while True:
        v = [rng.randint(-9, 9) for _ in range(r)]
        if any(v):
            return v


def detect_fermat(f: Poly, seed: int = 0, retries: int = FERMAT_RETRIES) -> FermatVerdict:
    """Decide whether f is a sum of r independent d-th powers (r = #variables)."""
    if f.is_zero() or not f.is_homogeneous():
        raise InputError("detect_fermat needs a nonzero homogeneous form")
    r, d = f.nvars, f.degree()
    if d < 3:
        raise InputError("detect_fermat needs degree >= 3")
    stage = _quadric_stage(f)
    if stage is not None:
        witness, detail = stage
        log.debug("not Fermat: %s (%s)", witness, detail)
        return FermatVerdict(CERTIFIED_NOT, f, witness=witness, reason=detail)
    rng = random.Random(seed)
    attempts = [([1] * r, [1] + [0] * (r - 1))] if r > 1 else []
    while len(attempts) < retries:
        attempts.append((_random_linear(rng, r), _random_linear(rng, r)))
    for l, l2 in attempts:
        M = _multiplication_operator(f, l, l2)
        if M is None:
            continue
        mp = univariate.minimal_polynomial(M)
        if not univariate.is_squarefree(mp):
            return FermatVerdict(CERTIFIED_NOT, f, witness=W_NON_REDUCED, minimal_polynomial=mp,
                                 operators=(tuple(l), tuple(l2)),
                                 reason="minimal polynomial of the multiplication operator has a repeated factor")
        if len(mp) - 1 != r:
            continue  # l/l2 does not separate the points
        roots = univariate.rational_roots(mp)
        if len(roots) < r:
            return FermatVerdict(CERTIFIED_FERMAT, f, minimal_polynomial=mp, irrational=True,
                                 operators=(tuple(l), tuple(l2)))
        pts = []
        for root in roots:
            shifted = Matrix.from_rows([[M[i, j] - (root if i == j else 0) for i in range(r)]
                                        for j in range(r)], r)
            ker = kernel_basis(shifted)
            if len(ker) != 1:
                raise StructuralError("eigenspace of a simple eigenvalue is not a line")
            pts.append(LinearFormPoint(ker[0]))
        lambdas = waring_from_points(pts, f)
        if lambdas is None or any(x == 0 for x in lambdas):
            raise StructuralError("recovered points do not give a Waring decomposition")
        return FermatVerdict(CERTIFIED_FERMAT, f, points=pts, lambdas=list(lambdas),
                             minimal_polynomial=mp, operators=(tuple(l), tuple(l2)))
    return FermatVerdict(UNDETERMINED, f, reason="genericity failure: no admissible pair of linear forms "
                                                 f"in {retries} attempts")
