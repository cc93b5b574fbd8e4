"""The compiled loop kernels and the vectorized numpy fallbacks must agree."""

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from extricat import _accel, kernels
from extricat.algebra import a2, path_algebra
from extricat.morphcat import triangular_matrix_algebra
from extricat.repcat import catalog as catmod


@st.composite
def int_matrices(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    r = draw(st.integers(1, 6))
    c = draw(st.integers(1, 6))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(vals, dtype=np.int64).reshape(r, c), p


@given(int_matrices())
@settings(max_examples=200, deadline=None)
def test_rref_backends_agree(mp):
    m, p = mp
    r1, p1 = kernels.rref_loop(m.copy(), p)
    r2, p2 = kernels.rref_vec(m.copy(), p)
    assert np.array_equal(r1, r2)
    assert np.array_equal(np.asarray(p1), np.asarray(p2))


@st.composite
def endo_bases(draw):
    p = draw(st.sampled_from([2, 3]))
    n = draw(st.integers(1, 3))
    k = draw(st.integers(1, 3))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=k * n * n, max_size=k * n * n))
    return np.array(vals, dtype=np.int64).reshape(k, n, n), p


@given(endo_bases())
@settings(max_examples=150, deadline=None)
def test_search_backends_agree(bp):
    basis, p = bp
    assert kernels.find_split_loop(basis, p, 1 << 12) == kernels.find_split_vec(basis, p, 1 << 12)
    assert (kernels.find_invertible_loop(basis, p, 1 << 12)
            == kernels.find_invertible_vec(basis, p, 1 << 12))


@pytest.mark.parametrize("alg_fn,dims", [
    (a2, (1, 1)),
    (a2, (2, 1)),
    (lambda: triangular_matrix_algebra(a2()), (1, 1, 1, 1)),
    (lambda: triangular_matrix_algebra(a2()), (1, 1, 0, 1)),
    (lambda: path_algebra("123", [("a", "1", "2"), ("b", "2", "3")], [[(1, ("a", "b"))]]),
     (1, 1, 1)),
])
def test_scan_backends_agree(alg_fn, dims, monkeypatch):
    a = alg_fn()
    monkeypatch.setattr(kernels, "scan_reps", kernels.scan_reps_loop)
    s1, e1 = catmod.scan_dimension_vector(a, dims)
    monkeypatch.setattr(kernels, "scan_reps", kernels.scan_reps_vec)
    s2, e2 = catmod.scan_dimension_vector(a, dims)
    assert np.array_equal(s1, s2)
    ok = s1 >= 0
    assert np.array_equal(e1[ok], e2[ok])


def test_backend_flag_in_subprocess():
    code = ("from extricat import _accel, kernels; "
            "print(_accel.backend_name(), kernels.rref is kernels.rref_vec)")
    env = dict(os.environ, EXTRICAT_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.split() == ["numpy", "True"]


def test_default_backend_is_numba():
    assert _accel.HAVE_NUMBA
    if os.environ.get("EXTRICAT_NUMBA", "1") != "0":
        assert _accel.backend_name() == "numba"
