import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from extricat.algebra import a2, path_algebra
from extricat.morphcat import triangular_matrix_algebra
from extricat.repcat.catalog import Catalog, CatalogMiss, enumerate_indecomposables
from extricat.repcat.decomp import decompose, find_isomorphism, is_indecomposable, is_isomorphic
from extricat.repcat.homext import (Conflation, ExtClass, conflation_to_ext, ext_dim, ext_space,
                                    ext_to_conflation, ext_transport, ext_transport_realized,
                                    hom_dim, hom_space, injective_of_vertex, is_projective,
                                    projective_cover, projective_of_vertex)
from extricat.repcat.rep import Rep, RepError, RepMap, direct_sum, kernel, cokernel, power
from extricat.verdict import Status

from oracles import brute_hom_count, cocycle_ext_dim, euler_form


def linear_a3():
    return path_algebra("123", [("a", "1", "2"), ("b", "2", "3")])


@pytest.fixture(scope="module")
def cat_a3():
    return enumerate_indecomposables(linear_a3(), 1)


@pytest.fixture(scope="module")
def cat_a3_rel():
    return enumerate_indecomposables(
        path_algebra("123", [("a", "1", "2"), ("b", "2", "3")], [[(1, ("a", "b"))]]), 1)


def test_catalog_counts(modA, modB, cat_a3, cat_a3_rel):
    assert len(enumerate_indecomposables(a2(), 2)) == 3
    assert len(cat_a3) == 6            # positive roots of A3
    assert len(cat_a3_rel) == 5        # the projective-injective of length 3 is cut
    assert len(modA) == 3 and len(modB) == 11


def test_catalog_dims_a2(modA):
    assert sorted(m.dims for m in modA.indecs) == [(0, 1), (1, 0), (1, 1)]


def test_catalog_over_f3():
    # representation type does not depend on the field
    alg = path_algebra("123", [("a", "1", "2"), ("b", "2", "3")], p=3)
    assert len(enumerate_indecomposables(alg, 1)) == 6


def test_rep_rejects_relation_violation():
    alg = path_algebra("123", [("a", "1", "2"), ("b", "2", "3")], [[(1, ("a", "b"))]])
    with pytest.raises(RepError):
        Rep.from_dict(alg, {"1": 1, "2": 1, "3": 1}, {"a": [[1]], "b": [[1]]})


def _pairs(cat):
    return list(itertools.product(cat.indecs, repeat=2))


def test_hom_dims_against_brute_force(cat_a3, cat_a3_rel, modB):
    for cat in (cat_a3, cat_a3_rel, modB):
        for m, n in _pairs(cat):
            assert cat.algebra.p ** hom_dim(m, n) == brute_hom_count(m, n)


def test_hom_dims_on_sums(cat_a3):
    m = direct_sum(cat_a3.indecs[0], cat_a3.indecs[3])
    n = power(cat_a3.indecs[5], 2)
    assert cat_a3.algebra.p ** hom_dim(m, n) == brute_hom_count(m, n)


def test_ext_against_cocycles(cat_a3, cat_a3_rel, modA, modB):
    for cat in (cat_a3, cat_a3_rel, modA, modB):
        for c, a in _pairs(cat):
            assert ext_dim(c, a) == cocycle_ext_dim(c, a), (c.dims, a.dims)


def test_euler_form_hereditary(cat_a3):
    alg = cat_a3.algebra
    for m, n in _pairs(cat_a3):
        assert hom_dim(m, n) - ext_dim(m, n) == euler_form(alg, m.dims, n.dims)


def test_ext_table_a2(modA):
    t = modA.ext_table()
    s1, s2 = modA.index_of("S1"), modA.index_of("S2")
    assert t.sum() == 1 and t[s1, s2] == 1


def test_projective_and_injective_vertices():
    alg = linear_a3()
    assert projective_of_vertex(alg, "1").dims == (1, 1, 1)
    assert projective_of_vertex(alg, "3").dims == (0, 0, 1)
    assert injective_of_vertex(alg, "3").dims == (1, 1, 1)
    assert injective_of_vertex(alg, "1").dims == (1, 0, 0)
    assert is_projective(projective_of_vertex(alg, "2"))
    assert not is_projective(Rep.simple(alg, "2"))


def test_projective_cover_is_exact(cat_a3_rel):
    for m in cat_a3_rel.indecs:
        cov = projective_cover(m)
        assert cov.epi.is_surjective()
        assert Conflation(cov.incl, cov.epi).is_exact()


def test_decompose_and_identify(cat_a3):
    x, y = cat_a3.indecs[1], cat_a3.indecs[4]
    m = direct_sum(x, y, y)
    parts = decompose(m)
    assert sorted(k for _, k in parts) == [1, 2]
    assert cat_a3.decompose(m) == {1: 1, 4: 2}
    assert is_indecomposable(x).status is Status.HOLDS
    assert is_indecomposable(m).status is Status.FAILS


def test_isomorphism_after_base_change(cat_a3):
    m = cat_a3.indecs[-1]
    # conjugate by a vertexwise change of basis in a sum
    s = direct_sum(m, m)
    g = [np.array([[1, 1], [0, 1]]) if d == 2 else np.eye(d, dtype=int) for d in s.dims]
    mats = []
    vi = s.algebra.quiver.vertex_index
    for arr, mat in zip(s.algebra.arrows, s.mats):
        gt, gs = g[vi[arr.target]], g[vi[arr.source]]
        mats.append((gt @ mat @ np.array([[1, 1], [0, 1]])) % 2)
    t = Rep(s.algebra, s.dims, mats)
    assert is_isomorphic(s, t).status is Status.HOLDS
    assert find_isomorphism(cat_a3.indecs[0], cat_a3.indecs[1]) is None


def test_catalog_miss(cat_a3):
    small = Catalog(cat_a3.algebra, cat_a3.indecs[:2])
    with pytest.raises(CatalogMiss):
        small.identify(cat_a3.indecs[-1])


def test_kernel_cokernel_dims(modB):
    for x, y in _pairs(modB)[:40]:
        for f in hom_space(x, y).basis:
            k, _ = kernel(f)
            c, _ = cokernel(f)
            assert k.total_dim + y.total_dim == x.total_dim + c.total_dim


def test_conflation_round_trip(modB):
    for c, a in _pairs(modB):
        for cls in ext_space(c, a).classes():
            conf = ext_to_conflation(cls)
            assert conf.is_exact()
            assert conflation_to_ext(conf) == cls


def test_zero_class_splits(modA):
    s1, s2 = modA.indecs[modA.index_of("S1")], modA.indecs[modA.index_of("S2")]
    z = ext_space(s1, s2).zero()
    assert ext_to_conflation(z).B.dims == (1, 1)
    nz = ExtClass(s1, s2, (1,))
    mid = ext_to_conflation(nz).B
    assert find_isomorphism(mid, modA.indecs[modA.index_of("P1")]) is not None


@st.composite
def transport_data(draw, cat):
    n = len(cat)
    for _ in range(50):
        ci, ai = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        if ext_dim(cat.indecs[ci], cat.indecs[ai]):
            break
    C, A = cat.indecs[ci], cat.indecs[ai]
    sp = ext_space(C, A)
    coords = draw(st.lists(st.integers(0, 1), min_size=sp.dim, max_size=sp.dim))
    A2 = cat.indecs[draw(st.integers(0, n - 1))]
    C2 = cat.indecs[draw(st.integers(0, n - 1))]

    def rand_map(src, tgt):
        hs = hom_space(src, tgt)
        return hs.element(draw(st.lists(st.integers(0, 1), min_size=hs.dim, max_size=hs.dim)))

    return ExtClass(C, A, coords), rand_map(A, A2), rand_map(C2, C)


def _transport_test(cat):
    @given(st.data())
    @settings(max_examples=60, deadline=None, suppress_health_check=list(HealthCheck))
    def run(data):
        delta, a, c = data.draw(transport_data(cat))
        assert ext_transport(delta, a=a) == ext_transport_realized(delta, a=a)
        assert ext_transport(delta, c=c) == ext_transport_realized(delta, c=c)
        assert ext_transport(delta, a=a, c=c) == ext_transport_realized(delta, a=a, c=c)
    run()


def test_transport_matches_pushout_pullback_B(modB):
    _transport_test(modB)


def test_transport_matches_pushout_pullback_A3(cat_a3_rel):
    _transport_test(cat_a3_rel)


def test_transport_is_linear(modB):
    for c, a in _pairs(modB):
        sp = ext_space(c, a)
        if sp.dim == 0:
            continue
        f = hom_space(a, a).basis[0]
        cls = list(sp.classes())
        for x, y in itertools.product(cls, repeat=2):
            assert ext_transport(x + y, a=f) == ext_transport(x, a=f) + ext_transport(y, a=f)


def test_transport_rejects_wrong_endpoints(modA):
    s1, s2 = modA.indecs[modA.index_of("S1")], modA.indecs[modA.index_of("S2")]
    with pytest.raises(RepError):
        ext_transport(ExtClass(s1, s2, (1,)), a=RepMap.identity(s1))
