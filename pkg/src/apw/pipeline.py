"""Subcanonical curves on scrolls and Veronese surfaces, their Artinian
reductions, Macaulay dual forms, and the end-to-end verifiers.

A curve X is given by a Cox polynomial g on the parametrised surface S in P^N.
Its homogeneous coordinate ring in degree j is the image of
Sym^j(ambient linear forms) in (sections of jH) / (g * sections of jH - C),
so every ideal and quotient below is computed degreewise inside Cox section
spaces, which are much smaller than Sym^j.

Ambient polynomials live in the operator ring (ring tag ``'d'``, N+1
variables); the reduced ring T' after killing eta1, eta2 has N-1 variables.
"""

from __future__ import annotations

import hashlib
import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .apolar import (CERTIFIED_FERMAT, UNDETERMINED, ArtinianGorenstein, FermatVerdict,
                     detect_fermat, dual_socle_generator, is_apolar_scheme, perp,
                     waring_from_points)
from .cox import CoxBasis, CoxQuotient, poly_class
from .linalg import (InputError, Matrix, SparseSpan, StructuralError, kernel_basis, rank,
                     rank_of_rows, solve)
from .poly import GradedBasis, LinearFormPoint, Poly, apolar_apply, format_poly, monomials
from .surfaces import (SCROLL, VERONESE, SurfaceEmbedding, build_embedding, curve_invariants,
                       line_bundle_cohomology, plane_cohomology, smoothness_window, DivisorClass)

log = logging.getLogger(__name__)

RETRIES = 8
COEFF_RANGE = 9
POINT_RANGE = 5


class UndeterminedError(RuntimeError):
    """A bounded resampling loop ran out of attempts."""


def derive_seed(seed: int, *labels) -> int:
    """Deterministic 64-bit sub-seed from a seed and labels."""
    h = hashlib.sha256(":".join(str(x) for x in (seed,) + labels).encode()).digest()
    return int.from_bytes(h[:8], "big")


# -- curves -----------------------------------------------------------------

@dataclass
class EmbeddedCurve:
    surface: SurfaceEmbedding
    g: Poly
    s: int
    genus: int
    degree: int

    @property
    def N(self) -> int:
        return self.surface.N

    @property
    def klass(self) -> tuple[int, ...]:
        return poly_class(self.surface.cox_kind, self.surface.e, self.g)

    def describe(self) -> str:
        return f"s={self.s} curve of genus {self.genus}, degree {self.degree} on {self.surface}"


def _sample_section(basis: CoxBasis, rng: random.Random) -> Poly:
    coeffs = [rng.choice([c for c in range(-COEFF_RANGE, COEFF_RANGE + 1) if c]) for _ in basis.monomials]
    return basis.poly(coeffs)


def curve_on_scroll(s: int, a1: int, a2: int, seed: int = 0, g: Poly | None = None) -> EmbeddedCurve:
    """General member of the s-subcanonical class on S(a1, a2)."""
    if s < 2:
        raise InputError("requires s >= 2")
    bad = smoothness_window(s, a1, a2)
    if bad:
        raise InputError(bad)
    inv = curve_invariants(s, a1, a2)
    S = build_embedding(SCROLL, a1, a2)
    basis = S.basis_of(inv.klass.pair)
    if g is None:
        g = _sample_section(basis, random.Random(seed))
    elif g.is_zero() or poly_class(S.cox_kind, S.e, g) != inv.klass.pair:
        raise InputError(f"equation is not a section of {inv.klass}")
    return EmbeddedCurve(S, g, s, inv.genus, inv.degree)


def plane_curve(m: int, s: int, seed: int = 0, g: Poly | None = None) -> EmbeddedCurve:
    """Plane curve of degree s*m + 3 under the degree-m Veronese embedding."""
    if m < 1 or s < 2:
        raise InputError("requires m >= 1 and s >= 2")
    d = s * m + 3
    S = build_embedding(VERONESE, m)
    basis = S.basis_of((d,))
    if g is None:
        g = _sample_section(basis, random.Random(seed))
    elif g.is_zero() or poly_class(S.cox_kind, S.e, g) != (d,):
        raise InputError(f"equation is not a plane curve of degree {d}")
    genus = (d - 1) * (d - 2) // 2
    if d % 2:
        n = (d - 1) // 2
        assert genus == n * (2 * n - 1)
    return EmbeddedCurve(S, g, s, genus, m * d)


# -- ideals and normality ---------------------------------------------------

def _distinct_images(S: SurfaceEmbedding, j: int) -> list[tuple]:
    seen = {}
    for m in monomials(S.N + 1, j):
        seen.setdefault(S.image_monomial(m), None)
    return list(seen)


def curve_ideal_piece(X: EmbeddedCurve, j: int) -> list[Poly]:
    """Basis of I(X)_j in the ambient ring."""
    if j < 1:
        raise InputError("degree must be positive")
    q = CoxQuotient(X.surface.section_basis(j), X.g)
    mons = monomials(X.N + 1, j)
    cols = [q.reduce_monomial(X.surface.image_monomial(m)) for m in mons]
    ker = kernel_basis(Matrix.from_columns(cols, len(q.target)))
    basis = GradedBasis(X.N + 1, j)
    return [basis.poly(v, "d") for v in ker]


def coordinate_ring_dim(X: EmbeddedCurve, j: int) -> int:
    """dim Sym^j - dim I(X)_j."""
    if j == 0:
        return 1
    q = CoxQuotient(X.surface.section_basis(j), X.g)
    return rank_of_rows([q.reduce_monomial(im) for im in _distinct_images(X.surface, j)], len(q.target))


def h0_curve(X: EmbeddedCurve, j: int) -> int:
    """h0(O_X(j)) from the cohomology of jH and jH - C on the surface."""
    S = X.surface
    if S.kind == SCROLL:
        e = S.e
        H = DivisorClass(e, *S.hyperplane())
        C = DivisorClass(e, *X.klass)
        A = line_bundle_cohomology(e, H * j)
        B = line_bundle_cohomology(e, H * j - C)
    else:
        k = j * S.params[0]
        A = plane_cohomology(k)
        B = plane_cohomology(k - X.klass[0])
    return A[0] - B[0] + B[1] - A[1]


def normality_check(X: EmbeddedCurve, j: int) -> bool:
    """j-normality: Sym^j -> H0(O_X(j)) is onto."""
    if j < 1:
        raise InputError("degree must be positive")
    return coordinate_ring_dim(X, j) == h0_curve(X, j)


# -- Artinian reduction -----------------------------------------------------

def _as_linear(eta, nvars: int) -> Poly:
    if isinstance(eta, Poly):
        if eta.nvars != nvars or eta.degree() != 1 or not eta.is_homogeneous():
            raise InputError("eta must be a linear form on the ambient space")
        return eta.with_ring("d")
    return Poly.linear(list(eta), "d")


def _coeffs(lin: Poly) -> list[Fraction]:
    out = [Fraction(0)] * lin.nvars
    for m, c in lin.terms.items():
        out[m.index(1)] = c
    return out


def complete_basis(eta1: Poly, eta2: Poly) -> list[int]:
    """Greedily pick ambient coordinates completing (eta1, eta2) to a basis."""
    n = eta1.nvars
    rows = [_coeffs(eta1), _coeffs(eta2)]
    if rank_of_rows(rows, n) != 2:
        raise InputError("eta1 and eta2 are linearly dependent")
    chosen = []
    for i in range(n):
        unit = [Fraction(int(i == k)) for k in range(n)]
        if rank_of_rows(rows + [unit], n) == len(rows) + 1:
            rows.append(unit)
            chosen.append(i)
    return chosen


def reduced_substitution(eta1: Poly, eta2: Poly, chosen: Sequence[int]) -> list[Poly]:
    """Image in T' (N-1 variables) of each ambient variable modulo (eta1, eta2)."""
    n = eta1.nvars
    r = len(chosen)
    B = Matrix.from_rows([[Fraction(int(i == k)) for k in range(n)] for i in chosen]
                         + [_coeffs(eta1), _coeffs(eta2)], n)
    # x = B^{-1} w, where w = (chosen coordinates, eta1, eta2)
    images = []
    for i in range(n):
        unit = [Fraction(int(i == k)) for k in range(n)]
        row = solve(B.transpose(), unit)  # row i of B^{-1}
        images.append(Poly.linear(list(row[:r]), "d"))
    return images


@dataclass
class ArtinianReduction:
    curve: EmbeddedCurve
    eta: tuple[Poly, Poly]
    chosen: list[int]
    hilbert: list[int]
    algebra: ArtinianGorenstein
    hilbert_to_cap: list[int] = field(default_factory=list)  # includes the zeros past the socle

    @property
    def nvars(self) -> int:
        return len(self.chosen)

    def point_in_reduced_coordinates(self, p: Sequence) -> LinearFormPoint:
        return LinearFormPoint([p[i] for i in self.chosen])


def _eta_images(S: SurfaceEmbedding, etas: Sequence[Poly], j: int) -> list[Poly]:
    if j < 1:
        return []
    pulls = [S.pullback(e) for e in etas]
    return [pb * Poly(S.basis.nvars, {m: 1}, "y") for m in _distinct_images(S, j - 1) for pb in pulls]


def _reduced_ideal(S: SurfaceEmbedding, modulus: Poly | None, etas: Sequence[Poly],
                   chosen: Sequence[int], j: int) -> tuple[SparseSpan, int, int]:
    """Ideal of the reduction in T'_j, plus (rank of eta-part, rank of image part)."""
    target = S.section_basis(j)
    q_mod = CoxQuotient(target, modulus)
    q_full = CoxQuotient(target, modulus, _eta_images(S, etas, j))
    r = len(chosen)
    tmons = monomials(r, j)
    cols = []
    for m in tmons:
        amb = [0] * (S.N + 1)
        for k, e in zip(chosen, m):
            amb[k] += e
        cols.append(q_full.reduce_monomial(S.image_monomial(amb)))
    mat = Matrix.from_columns(cols, len(target))
    span = SparseSpan()
    for v in kernel_basis(mat):
        span.add({k: c for k, c in enumerate(v) if c})
    image_rank = rank_of_rows([q_mod.reduce_monomial(im) for im in _distinct_images(S, j)], len(target))
    return span, q_full.modulus_dim - q_mod.modulus_dim, image_rank


def artinian_reduction(X: EmbeddedCurve, eta1, eta2, cap: int | None = None,
                       check_normality: bool = True) -> ArtinianReduction:
    """A = S_X / (eta1, eta2), computed degreewise up to ``cap`` (default s+3)."""
    n = X.N + 1
    eta1, eta2 = _as_linear(eta1, n), _as_linear(eta2, n)
    chosen = complete_basis(eta1, eta2)
    cap = X.s + 3 if cap is None else cap
    if check_normality:
        for j in range(1, X.s + 3):
            if not normality_check(X, j):
                raise StructuralError(f"curve is not {j}-normal; refusing to reduce")
    spans = {}
    hf = []
    for j in range(cap + 1):
        if j == 0:
            spans[0] = SparseSpan()
            hf.append(1)
            continue
        span, eta_rank, image_rank = _reduced_ideal(X.surface, X.g, (eta1, eta2), chosen, j)
        h = image_rank - eta_rank
        if h != comb(len(chosen) - 1 + j, j) - span.dim:
            raise StructuralError(f"degree {j}: quotient dimension mismatch between presentations")
        spans[j] = span
        hf.append(h)
    s = X.s
    if hf[s + 2] != 1 or any(hf[j] for j in range(s + 3, cap + 1)):
        raise StructuralError(f"Hilbert function {hf} does not have socle degree {s + 2} (non-generic eta?)")
    if hf[:s + 3] != hf[:s + 3][::-1]:
        raise StructuralError(f"Hilbert function {hf} is not symmetric")
    if s == 2:
        N, g = X.N, X.genus
        expected = [1, N - 1, g - 2 * N - 1, N - 1, 1]
        if hf[:5] != expected:
            raise StructuralError(f"Hilbert function {hf[:5]} differs from {expected}")
    algebra = ArtinianGorenstein.from_ideal(len(chosen), spans, cap)
    return ArtinianReduction(X, (eta1, eta2), chosen, hf[:s + 3], algebra, hf)


def alpha_map(X: EmbeddedCurve, eta1=None, eta2=None, reduction: ArtinianReduction | None = None) -> Poly:
    """The Macaulay dual form F of S_X/(eta1, eta2), in N-1 variables."""
    if reduction is None:
        reduction = artinian_reduction(X, eta1, eta2)
    F = dual_socle_generator(reduction.algebra)
    if not perp(F).same_as(reduction.algebra.as_apolar_ideal()):
        raise StructuralError("perp of the dual form differs from the reduction's ideal")
    return F


# -- the cut by two hyperplanes ---------------------------------------------

@dataclass
class GammaCut:
    length: int
    hilbert: list[int]
    points: list[tuple] | None = None


def gamma_cut(S: SurfaceEmbedding, eta1, eta2, cap: int = 4, points=None) -> GammaCut:
    """Length of S cut by V(eta1, eta2), from the stabilised Hilbert function."""
    n = S.N + 1
    eta1, eta2 = _as_linear(eta1, n), _as_linear(eta2, n)
    complete_basis(eta1, eta2)
    hf = [1]
    for j in range(1, cap + 1):
        target = S.section_basis(j)
        image_rank = len(_distinct_images(S, j))
        eta_rank = CoxQuotient(target, None, _eta_images(S, (eta1, eta2), j)).modulus_dim
        hf.append(image_rank - eta_rank)
    expected = S.degree
    if cap < 2 or hf[-1] != hf[-2] or hf[-1] != expected:
        raise StructuralError(f"cut Hilbert function {hf} does not stabilise at {expected}")
    return GammaCut(expected, hf, points)


def gamma_ideal(S: SurfaceEmbedding, reduction: ArtinianReduction, e: int) -> list[Poly]:
    """Degree-e part of the ideal of the cut, in the reduced ring T'."""
    span, _, _ = _reduced_ideal(S, None, reduction.eta, reduction.chosen, e)
    r = reduction.nvars
    mons = monomials(r, e)
    return [Poly(r, {mons[k]: c for k, c in row.items()}, "d") for row in span.basis()]


def _sample_surface_point(S: SurfaceEmbedding, rng: random.Random) -> tuple:
    def pair():
        while True:
            a, b = rng.randint(-POINT_RANGE, POINT_RANGE), rng.randint(-POINT_RANGE, POINT_RANGE)
            if a or b:
                return [a, b]
    if S.kind == SCROLL:
        cox = pair() + pair()
    else:
        while True:
            cox = [rng.randint(-POINT_RANGE, POINT_RANGE) for _ in range(3)]
            if any(cox):
                break
    return S.evaluate_point(cox)


def rational_cut(S: SurfaceEmbedding, seed: int | random.Random = 0,
                 retries: int = RETRIES) -> tuple[Poly, Poly, list[tuple]]:
    """Two hyperplanes through N-1 rational surface points cutting exactly them."""
    if S.degree != S.N - 1:
        raise InputError("rational_cut needs a surface of minimal degree")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    n = S.N + 1
    for _ in range(retries):
        pts = []
        while len(pts) < S.N - 1:
            p = LinearFormPoint(_sample_surface_point(S, rng))
            if p not in pts:
                pts.append(p)
        mat = Matrix.from_rows([p.coords for p in pts], n)
        if rank(mat) != S.N - 1:
            continue
        ker = kernel_basis(mat)
        eta1, eta2 = Poly.linear(list(ker[0]), "d"), Poly.linear(list(ker[1]), "d")
        try:
            gamma_cut(S, eta1, eta2)
        except StructuralError:
            continue
        return eta1, eta2, [p.coords for p in pts]
    raise UndeterminedError(f"no rational cut with exact length {S.N - 1} in {retries} attempts")


def random_eta(n: int, rng: random.Random) -> tuple[Poly, Poly]:
    while True:
        e1 = Poly.linear([rng.randint(-COEFF_RANGE, COEFF_RANGE) for _ in range(n)], "d")
        e2 = Poly.linear([rng.randint(-COEFF_RANGE, COEFF_RANGE) for _ in range(n)], "d")
        if not e1.is_zero() and not e2.is_zero() and rank_of_rows([_coeffs(e1), _coeffs(e2)], n) == 2:
            return e1, e2


# -- reports and verifiers --------------------------------------------------

SCROLL_FERMAT = "scroll-fermat"
PLANE_WARING = "plane-waring"
RATIONAL = "rational"
GENERIC = "generic"


@dataclass
class PipelineReport:
    params: dict
    seed: int
    trial: int
    normality: list[bool]
    hilbert_function: list[int]
    dual_form: str
    fermat_verdict: dict
    gamma: dict
    timings_ms: dict | None = None
    verdict: FermatVerdict | None = field(default=None, repr=False)
    form: Poly | None = field(default=None, repr=False)
    error: str | None = None

    def to_json(self) -> dict:
        return {
            "params": self.params,
            "seed": self.seed,
            "trial": self.trial,
            "normality": self.normality,
            "hilbert_function": self.hilbert_function,
            "dual_form": self.dual_form,
            "fermat_verdict": self.fermat_verdict,
            "gamma": self.gamma,
            "timings_ms": self.timings_ms,
        }

    @property
    def ok(self) -> bool:
        if self.error:
            return False
        if self.params["kind"] == SCROLL_FERMAT:
            return self.fermat_verdict.get("tag") == CERTIFIED_FERMAT and bool(self.gamma.get("apolar"))
        return bool(self.gamma.get("apolar"))


def _build_curve(kind: str, params: dict, seed: int) -> EmbeddedCurve:
    if kind == SCROLL_FERMAT:
        return curve_on_scroll(params["s"], params["a1"], params["a2"], seed=seed)
    if kind == PLANE_WARING:
        return plane_curve(params["m"], params["s"], seed=seed)
    raise InputError(f"unknown verification kind {kind!r}")


def run_trial(kind: str, params: dict, seed: int, trial: int, regime: str = RATIONAL,
              timings: bool = False) -> PipelineReport:
    """One curve, one cut, one dual form, all certificates."""
    sub = derive_seed(seed, trial)
    rng = random.Random(sub)
    clock: dict[str, float] = {}
    t0 = time.perf_counter()

    def lap(name):
        nonlocal t0
        t = time.perf_counter()
        clock[name] = round((t - t0) * 1000, 3)
        t0 = t

    report_params = {"kind": kind, **params, "eta": regime}
    X = _build_curve(kind, params, sub)
    S = X.surface
    s = X.s
    normality = [normality_check(X, j) for j in range(1, s + 4)]
    lap("normality")
    red = None
    points = None
    last_error = "no attempt"
    for _ in range(RETRIES):
        if regime == RATIONAL:
            eta1, eta2, points = rational_cut(S, rng)
        else:
            eta1, eta2 = random_eta(S.N + 1, rng)
            points = None
        try:
            red = artinian_reduction(X, eta1, eta2, check_normality=False)
            gamma = gamma_cut(S, eta1, eta2, cap=max(4, s + 2), points=points)
            break
        except StructuralError as exc:
            last_error = str(exc)
            log.info("trial %d: resampling cut (%s)", trial, exc)
            red = None
    if red is None:
        return PipelineReport(report_params, seed, trial, normality, [], "", {
            "tag": UNDETERMINED, "reason": f"no generic cut in {RETRIES} attempts: {last_error}"},
            {"length": None, "apolar": False}, clock if timings else None, error=last_error)
    lap("reduction")
    log.debug("trial %d: reduction HF %s", trial, red.hilbert)
    F = alpha_map(X, reduction=red)
    lap("dual_form")
    verdict = detect_fermat(F, seed=sub) if F.degree() >= 3 else None
    lap("fermat")
    # the cut's ideal sits inside F-perp in every degree up to the socle
    apolar = all(apolar_apply(D, F).is_zero()
                 for e in range(1, s + 3) for D in gamma_ideal(S, red, e))
    gamma_json: dict = {"length": gamma.length}
    if points is not None:
        red_pts = [red.point_in_reduced_coordinates(p) for p in points]
        cert = is_apolar_scheme(red_pts, F)
        lambdas = waring_from_points(red_pts, F)
        apolar = apolar and bool(cert) and lambdas is not None
        gamma_json["points"] = [[str(c) for c in p.coords] for p in red_pts]
    gamma_json["apolar"] = apolar
    lap("apolarity")
    return PipelineReport(
        params=report_params, seed=seed, trial=trial, normality=normality,
        hilbert_function=red.hilbert, dual_form=format_poly(F),
        fermat_verdict=verdict.to_json() if verdict else {"tag": UNDETERMINED, "reason": "degree < 3"},
        gamma=gamma_json, timings_ms=clock if timings else None, verdict=verdict, form=F)


def verify_theorem(kind: str, params: dict, trials: int = 1, seed: int = 0,
                   regime: str = RATIONAL, timings: bool = False, jobs: int = 1) -> list[PipelineReport]:
    """Run ``trials`` independent trials; reports come back in trial order."""
    if kind == SCROLL_FERMAT:
        bad = smoothness_window(params["s"], params["a1"], params["a2"])
        if bad:
            raise InputError(bad)
        if params["s"] < 2:
            raise InputError("requires s >= 2")
    elif kind == PLANE_WARING:
        if params["m"] < 1 or params["s"] < 2:
            raise InputError("requires m >= 1 and s >= 2")
        if regime == RATIONAL and params["m"] > 2:
            raise InputError("rational cuts need a surface of minimal degree (m <= 2)")
    else:
        raise InputError(f"unknown verification kind {kind!r}")
    args = [(kind, params, seed, t, regime, timings) for t in range(trials)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_run_trial_safe, args))
    return [_run_trial_safe(a) for a in args]


def _run_trial_safe(args) -> PipelineReport:
    kind, params, seed, trial, regime, timings = args
    try:
        return run_trial(kind, params, seed, trial, regime, timings)
    except (StructuralError, UndeterminedError) as exc:
        return PipelineReport({"kind": kind, **params, "eta": regime}, seed, trial, [], [], "",
                              {"tag": UNDETERMINED, "reason": str(exc)}, {"length": None, "apolar": False},
                              None, error=str(exc))
