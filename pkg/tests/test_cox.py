import pytest
from hypothesis import given, strategies as st

from apw.cox import (CoxQuotient, cox_basis, cox_multiply_and_reduce, hirzebruch_basis,
                     monomial_class, plane_basis, poly_class)
from apw.linalg import InputError, rank
from apw.poly import Poly
from oracles import count_sections


def test_basis_examples():
    b = hirzebruch_basis(1, 1, 2)
    assert len(b) == 5
    assert set(b.monomials) == {(2, 0, 1, 0), (1, 1, 1, 0), (0, 2, 1, 0), (1, 0, 0, 1), (0, 1, 0, 1)}
    assert len(cox_basis(("hirzebruch", 0), (1, 1))) == 4
    assert len(cox_basis("plane", 2)) == 6


@given(st.integers(0, 4), st.integers(0, 5), st.integers(-3, 12))
def test_basis_size_matches_enumeration(e, a, b):
    basis = hirzebruch_basis(e, a, b)
    assert len(basis) == count_sections(e, a, b)
    for m in basis.monomials:
        assert monomial_class("hirzebruch", e, m) == (a, b)


def test_negative_class_is_rejected():
    with pytest.raises(InputError):
        hirzebruch_basis(0, -1, 3)
    with pytest.raises(InputError):
        plane_basis(-1)
    with pytest.raises(InputError):
        cox_basis("torus", 2)


def test_unit_column_without_modulus():
    target = hirzebruch_basis(0, 2, 2)
    u_t0, u_t1 = (1, 0, 1, 0), (0, 1, 1, 0)
    m = cox_multiply_and_reduce([(u_t0, u_t1)], target)
    col = m.column(0)
    assert sum(col) == 1 and col[target.index[(1, 1, 2, 0)]] == 1


def test_full_modulus_kills_everything():
    target = plane_basis(2)
    g = Poly(3, {(0, 0, 0): 1}, "y")  # a unit modulus spans the whole piece
    m = cox_multiply_and_reduce([((1, 0, 0), (0, 1, 0)), ((0, 0, 1), (0, 0, 1))], target, g)
    assert all(x == 0 for x in m.entries)


def test_products_of_sections_span_the_doubled_class():
    src = hirzebruch_basis(1, 1, 2)
    target = hirzebruch_basis(1, 2, 4)
    pairs = [(a, b) for i, a in enumerate(src.monomials) for b in src.monomials[i:]]
    assert rank(cox_multiply_and_reduce(pairs, target)) == 12 == len(target)


def test_quotient_dimension_is_complement():
    target = hirzebruch_basis(0, 3, 3)
    g = hirzebruch_basis(0, 1, 1).poly([1, 2, -1, 3])
    q = CoxQuotient(target, g)
    assert q.modulus_dim == len(hirzebruch_basis(0, 2, 2))
    assert poly_class("hirzebruch", 0, g) == (1, 1)
    with pytest.raises(InputError):
        q.reduce_monomial((0, 0, 0, 0))
