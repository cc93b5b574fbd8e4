import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from extricat import exactlin as el
from oracles import rank_mod_p

PRIMES = [2, 3, 5]


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    p = draw(st.sampled_from(PRIMES))
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(vals, dtype=el.DTYPE).reshape(r, c), p


def test_is_prime():
    assert [n for n in range(20) if el.is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_fieldspec_rejects_composite():
    with pytest.raises(ValueError):
        el.FieldSpec(4)
    assert el.FieldSpec(7).inv(3) == 5


@given(matrices())
@settings(max_examples=200, deadline=None)
def test_rank_matches_reference(mp):
    m, p = mp
    assert el.rank(m, p) == rank_mod_p(m.tolist(), p)


@given(matrices())
@settings(max_examples=200, deadline=None)
def test_rref_is_reduced_and_row_equivalent(mp):
    m, p = mp
    red, piv = el.rref(m, p)
    r = len(piv)
    assert r == rank_mod_p(m.tolist(), p)
    for k, c in enumerate(piv):
        col = red[:, c]
        assert col[k] == 1 and not np.any(np.delete(col, k))
    assert not np.any(red[r:])
    # same row space: stacking adds no rank
    if m.size:
        assert rank_mod_p(np.vstack([m, red]).tolist(), p) == r


@given(matrices())
@settings(max_examples=200, deadline=None)
def test_kernel_basis(mp):
    m, p = mp
    k = el.kernel_basis(m, p)
    assert k.shape == (m.shape[1], m.shape[1] - rank_mod_p(m.tolist(), p))
    if k.size and m.shape[0]:
        assert not np.any(el.mul(m, k, p))
    assert rank_mod_p(k.T.tolist(), p) == k.shape[1]


def test_kernel_by_enumeration():
    p = 3
    m = np.array([[1, 2, 0], [2, 1, 0]], dtype=el.DTYPE)
    k = el.kernel_basis(m, p)
    brute = [v for v in itertools.product(range(p), repeat=3)
             if not np.any((m @ np.array(v)) % p)]
    assert len(brute) == p ** k.shape[1]


@given(matrices(), st.data())
@settings(max_examples=150, deadline=None)
def test_solve(mp, data):
    m, p = mp
    x0 = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=m.shape[1],
                                     max_size=m.shape[1])), dtype=el.DTYPE)
    b = el.mul(m, x0.reshape(-1, 1), p).ravel() if m.size else np.zeros(m.shape[0], el.DTYPE)
    x = el.solve(m, b, p)
    assert x is not None
    assert np.array_equal(el.mul(m, x.reshape(-1, 1), p).ravel() if m.size else b, b)


def test_solve_inconsistent():
    m = np.array([[1, 0], [1, 0]], dtype=el.DTYPE)
    assert el.solve(m, np.array([0, 1]), 2) is None


def test_solve_all_returns_kernel():
    m = np.array([[1, 1, 0]], dtype=el.DTYPE)
    x, K = el.solve_all(m, np.array([1]), 2)
    assert K.shape == (3, 2)


@given(matrices(max_rows=4, max_cols=4))
@settings(max_examples=100, deadline=None)
def test_cokernel_dimension(mp):
    m, p = mp
    ck = el.cokernel(m, p)
    assert ck.dim == m.shape[0] - rank_mod_p(m.tolist(), p)
    if m.size and ck.dim:
        assert not np.any(el.mul(ck.q, m, p))


def test_inverse_roundtrip():
    p = 5
    m = np.array([[2, 1], [1, 1]], dtype=el.DTYPE)
    inv = el.inverse(m, p)
    assert np.array_equal(el.mul(m, inv, p), el.identity(2))


def test_inverse_of_singular_raises():
    with pytest.raises(Exception):
        el.inverse(np.array([[1, 1], [1, 1]], dtype=el.DTYPE), 2)


def test_enumerate_vectors_counts():
    assert len(list(el.enumerate_vectors(3, 2))) == 8
    assert len(list(el.enumerate_vectors(2, 3))) == 9
