import random
from math import comb

import pytest
from hypothesis import assume, given, strategies as st

from apw.apolar import (CERTIFIED_FERMAT, CERTIFIED_NOT, W_DEGENERATE, W_LOCUS_LENGTH, W_NON_REDUCED,
                        W_QUADRIC_COUNT, detect_fermat, dual_socle_generator,
                        fermat_perp, hilbert_function, ideal_of_points, is_apolar_scheme,
                        minimal_generators, perp, quotient_by_generators, quotient_by_perp, same_span,
                        waring_from_points, waring_rank_lower_bound)
from apw.linalg import InputError, StructuralError, rank_of_rows
from apw.poly import (GradedBasis, LinearFormPoint, Poly, apolar_apply, monomials, parse_poly,
                      power_of_linear_form)
from oracles import hilbert_function_by_derivatives

P = parse_poly


def gen_counts(f):
    return {e: len(g) for e, g in minimal_generators(perp(f)).items()}


def random_invertible(rng, r):
    while True:
        rows = [[rng.randint(-3, 3) for _ in range(r)] for _ in range(r)]
        if rank_of_rows(rows, r) == r:
            return rows


def change_coordinates(f, rows):
    images = [Poly.linear(row) for row in rows]
    return f.substitute(images)


@st.composite
def small_forms(draw, max_vars=3, max_degree=4, min_degree=1):
    r = draw(st.integers(1, max_vars))
    d = draw(st.integers(min_degree, max_degree))
    coeffs = draw(st.lists(st.integers(-9, 9), min_size=len(monomials(r, d)), max_size=len(monomials(r, d))))
    assume(any(coeffs))
    return GradedBasis(r, d).poly(coeffs)


# -- perp and Hilbert functions ---------------------------------------------

def test_perp_of_binary_fermat_quartic():
    I = perp(P("x0^4+x1^4"))
    J = quotient_by_generators([P("d0*d1"), P("d0^4-d1^4")], 2, 5).as_apolar_ideal()
    assert I.same_as(J)


def test_perp_of_a_pure_power():
    I = perp(P("x0^3", 3))
    for e in range(1, 4):
        kept = {m for p in I.piece(e) for m in p.terms}
        assert (e, 0, 0) not in kept
        assert I.dim(e) == comb(e + 2, 2) - 1


def test_perp_of_x0_cubed_x1_low_degrees():
    I = perp(P("x0^3*x1"))
    assert I.dim(1) == 0
    assert same_span(I.piece(2), [P("d1^2", 2)])


def test_hilbert_function_examples():
    assert hilbert_function(P("x0^4+x1^4")) == [1, 2, 2, 2, 1]
    assert hilbert_function(P("x0^4+x1^4+x2^4+x3^4")) == [1, 4, 4, 4, 1]
    assert hilbert_function(P("x0^5", 3)) == [1] * 6


def test_minimal_generator_examples():
    assert gen_counts(P("x0^4+x1^4")) == {2: 1, 4: 1}
    assert gen_counts(P("x0^4", 2)) == {1: 1, 5: 1}
    assert gen_counts(P("x0^4+x1^4+x2^4")) == {2: 3, 4: 2}
    # the quartic generator is d0^4; nothing new appears in degree 5
    gens = minimal_generators(perp(P("x0^3*x1")))
    assert {e: len(g) for e, g in gens.items()} == {2: 1, 4: 1}
    assert same_span(gens[2], [P("d1^2")])


def test_fermat_perp_examples():
    assert fermat_perp(2, 4).same_as(perp(P("x0^4+x1^4")))
    assert fermat_perp(1, 5).same_as(perp(P("x0^5")))
    assert fermat_perp(3, 5).same_as(perp(P("x0^5+x1^5+x2^5")))


def test_perp_errors():
    with pytest.raises(InputError):
        perp(Poly(2, {}))
    with pytest.raises(InputError):
        perp(P("x0^2+x1"))


@given(small_forms())
def test_hilbert_function_matches_derivative_oracle(f):
    assert hilbert_function(f) == hilbert_function_by_derivatives(f)


@given(small_forms())
def test_hilbert_function_is_symmetric(f):
    hf = hilbert_function(f)
    d = f.degree()
    assert hf[0] == hf[d] == 1
    assert hf == hf[::-1]


@given(small_forms())
def test_perp_is_an_ideal(f):
    I = perp(f)
    d = f.degree()
    for e in range(1, d):
        upper = I.piece(e + 1)
        for p in I.piece(e):
            for i in range(f.nvars):
                q = p * Poly.variable(f.nvars, i, "d")
                assert rank_of_rows([GradedBasis(f.nvars, e + 1).coordinates(x) for x in upper + [q]],
                                    len(monomials(f.nvars, e + 1))) == len(upper)
    for D in I.piece(d):
        assert apolar_apply(D, f).is_zero()


# -- Macaulay duality -------------------------------------------------------

def test_dual_of_fermat_ideal():
    A = quotient_by_generators([P("d0*d1"), P("d0^4-d1^4")], 2, 5)
    assert dual_socle_generator(A) == P("x0^4+x1^4")


def test_dual_of_pure_power_ideal():
    A = quotient_by_generators([P("d1", 3), P("d2", 3), P("d0^4", 3)], 3, 5)
    assert dual_socle_generator(A) == P("x0^3", 3)


def test_dual_rejects_non_gorenstein():
    with pytest.raises(StructuralError):
        quotient_by_generators([P("d0^2"), P("d0*d1"), P("d1^3")], 2, 4)
    with pytest.raises(StructuralError):
        quotient_by_generators([P("d0*d1")], 2, 4)


@given(small_forms())
def test_macaulay_round_trip(f):
    F = dual_socle_generator(quotient_by_perp(f))
    assert F == f.normalized()


# -- points -----------------------------------------------------------------

def test_ideal_of_points_examples():
    assert same_span(ideal_of_points([(1, 0), (0, 1)], 2), [P("d0*d1")])
    coord = [tuple(int(i == j) for j in range(4)) for i in range(4)]
    ideal = ideal_of_points(coord, 2)
    assert len(ideal) == 6
    assert same_span(ideal, [Poly(4, {tuple(int(k in (i, j)) for k in range(4)): 1}, "d")
                             for i in range(4) for j in range(i + 1, 4)])
    assert same_span(ideal_of_points([(1, 1)], 1), [P("d0-d1")])
    with pytest.raises(InputError):
        ideal_of_points([(1, 1), (2, 2)], 2)


def test_apolarity_examples():
    assert is_apolar_scheme([(1, 0), (0, 1)], P("x0^4+x1^4"))
    cert = is_apolar_scheme([(1, 1)], P("x0*x1"))
    assert not cert and cert.failed_degree == 1
    assert is_apolar_scheme([(1, 0), (0, 1), (1, 1)], P("x0^3+x1^3") + power_of_linear_form((1, 1), 3))


def test_waring_examples():
    assert waring_from_points([(1, 0), (0, 1)], P("x0^4+x1^4")) == (1, 1)
    assert waring_from_points([(1, 1)], P("x0^2+2*x0*x1+x1^2")) == (1,)
    assert waring_from_points([(1, 0), (0, 1)], P("x0^3*x1")) is None


def test_rank_lower_bound_examples():
    assert waring_rank_lower_bound(P("x0^4+x1^4")) == 2
    assert waring_rank_lower_bound(P("x0^6", 2)) == 1
    assert waring_rank_lower_bound(P("x0^3*x1")) == 2


@st.composite
def point_sets(draw):
    r = draw(st.integers(1, 3))
    n = draw(st.integers(1, 5))
    pts = draw(st.lists(st.tuples(*[st.integers(-3, 3)] * r).filter(any), min_size=n, max_size=n))
    pts = list({LinearFormPoint(p): None for p in pts})
    return r, pts


@given(point_sets(), st.integers(1, 4), st.lists(st.integers(-4, 4), min_size=5, max_size=5),
       st.booleans())
def test_apolarity_lemma_equivalence(data, d, lambdas, in_span):
    r, pts = data
    if in_span:
        f = Poly(r, {})
        for p, l in zip(pts, lambdas):
            f = f + power_of_linear_form(p, d) * l
        if f.is_zero():
            return
    else:
        rng = random.Random(hash((tuple(lambdas), d)))
        f = GradedBasis(r, d).poly([rng.randint(-9, 9) for _ in monomials(r, d)])
        if f.is_zero():
            return
    assert bool(is_apolar_scheme(pts, f)) == (waring_from_points(pts, f) is not None)


# -- Fermat detection -------------------------------------------------------

def test_literal_fermat():
    v = detect_fermat(P("x0^4+x1^4+x2^4"))
    assert v.tag == CERTIFIED_FERMAT
    assert set(v.points) == {LinearFormPoint(p) for p in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]}
    assert list(v.lambdas) == [1, 1, 1]
    assert v.verify()


@pytest.mark.parametrize("text,witness", [
    ("x0^3*x1", W_NON_REDUCED),
    ("x0^2*x1^2", W_QUADRIC_COUNT),
    ("x0^4+x0*x1^3", W_QUADRIC_COUNT),
    ("x0*x1*x2", W_LOCUS_LENGTH),
])
def test_negative_controls(text, witness):
    v = detect_fermat(P(text))
    assert (v.tag, v.witness) == (CERTIFIED_NOT, witness)
    assert v.verify()


def test_non_reduced_operator_has_double_root():
    v = detect_fermat(P("x0^3*x1"))
    # l = d0 + d1, l' = d0 gives (t - 1)^2
    assert v.operators == ((1, 1), (1, 0))
    assert v.minimal_polynomial == [1, -2, 1]


def test_degenerate_variables():
    v = detect_fermat(P("x0^4+x1^4", 3))
    assert (v.tag, v.witness) == (CERTIFIED_NOT, W_DEGENERATE)


def test_irrational_branch():
    # (x0 + sqrt2 x1)^4 + (x0 - sqrt2 x1)^4
    v = detect_fermat(P("2*x0^4+24*x0^2*x1^2+8*x1^4"))
    assert v.tag == CERTIFIED_FERMAT and v.irrational and v.points is None
    assert v.verify()


@given(st.integers(2, 3), st.integers(3, 5), st.integers(0, 10**6))
def test_fermat_is_invariant_under_coordinate_change(r, d, seed):
    rng = random.Random(seed)
    f = change_coordinates(P("+".join(f"x{i}^{d}" for i in range(r))), random_invertible(rng, r))
    v = detect_fermat(f, seed=seed)
    assert v.tag == CERTIFIED_FERMAT
    assert v.verify()


@given(st.integers(0, 10**6))
def test_rank_three_binary_quartic_is_not_fermat(seed):
    rng = random.Random(seed)
    pts = set()
    while len(pts) < 3:
        c = (rng.randint(-4, 4), rng.randint(-4, 4))
        if any(c):
            pts.add(LinearFormPoint(c))
    f = sum((power_of_linear_form(p, 4) for p in pts), Poly(2, {}))
    assume(not f.is_zero() and hilbert_function(f)[2] == 3)
    v = detect_fermat(f)
    assert v.tag == CERTIFIED_NOT and v.verify()
