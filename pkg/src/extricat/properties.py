"""Invariant suites that must hold in every extension-closed carrier and
recollement scenario.

Each check is backed by a theorem, so a failure is reported as
INCONSISTENT rather than FAILS: it indicates a bug, not a property of the
input.
"""

from __future__ import annotations

import itertools
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import exactlin as el
from .exstruct import ExCat, describe_conflation, et4_compose, ext_classes, wic_spot_check
from .morphcat import ADJUNCTIONS, SYMBOLS
from .recollement import RecollementScenario, enough_injectives, enough_projectives, \
    injective_indices, projective_indices
from .repcat.homext import (Conflation, ExtClass, conflation_to_ext, ext_dim, ext_space,
                            ext_to_conflation, ext_transport, hom_space)
from .repcat.rep import Rep, RepMap
from .verdict import CapExceeded, Caps, DEFAULT_CAPS, Status, Verdict, combine


# ---------------------------------------------------------------------------
# linear maps between Hom and Ext spaces
# ---------------------------------------------------------------------------


def _hom_matrix(src_hom, tgt_hom, fn) -> np.ndarray:
    cols = [tgt_hom.coords(fn(b)) for b in src_hom.basis]
    if not cols:
        return np.zeros((tgt_hom.dim, 0), dtype=el.DTYPE)
    return np.stack(cols, axis=1).reshape(tgt_hom.dim, len(cols))


def _basis_classes(C: Rep, A: Rep) -> List[ExtClass]:
    d = ext_dim(C, A)
    return [ExtClass(C, A, tuple(int(i == k) for i in range(d))) for k in range(d)]


def _ext_matrix(sources: Sequence, tgt_dim: int, fn) -> np.ndarray:
    cols = [np.asarray(fn(s).coords, dtype=el.DTYPE) for s in sources]
    if not cols:
        return np.zeros((tgt_dim, 0), dtype=el.DTYPE)
    return np.stack(cols, axis=1).reshape(tgt_dim, len(cols))


def _exact_at(m_in: np.ndarray, m_out: np.ndarray, dim: int, p: int) -> bool:
    if m_in.shape[1] and m_out.shape[0]:
        if np.any(el.mul(m_out, m_in, p)):
            return False
    r_in = el.rank(m_in, p) if m_in.size else 0
    r_out = el.rank(m_out, p) if m_out.size else 0
    return r_in + r_out == dim


def hom_ext_sequences(c: Conflation, X: Rep) -> Dict[str, bool]:
    """Exactness of the covariant and contravariant five-term Hom–Ext sequences
    of a conflation at a test object, at the three interior positions."""
    p = X.p
    A, B, C = c.A, c.B, c.C
    f, g = c.incl, c.proj
    delta = conflation_to_ext(c)
    out = {}
    # covariant: (X, A) -> (X, B) -> (X, C) -> E(X, A) -> E(X, B)
    hXA, hXB, hXC = hom_space(X, A), hom_space(X, B), hom_space(X, C)
    m1 = _hom_matrix(hXA, hXB, lambda u: f @ u)
    m2 = _hom_matrix(hXB, hXC, lambda u: g @ u)
    m3 = _ext_matrix(hXC.basis, ext_dim(X, A), lambda u: ext_transport(delta, c=u))
    m4 = _ext_matrix(_basis_classes(X, A), ext_dim(X, B), lambda e: ext_transport(e, a=f))
    out["cov@(X,B)"] = _exact_at(m1, m2, hXB.dim, p)
    out["cov@(X,C)"] = _exact_at(m2, m3, hXC.dim, p)
    out["cov@E(X,A)"] = _exact_at(m3, m4, ext_dim(X, A), p)
    # contravariant: (C, X) -> (B, X) -> (A, X) -> E(C, X) -> E(B, X)
    hCX, hBX, hAX = hom_space(C, X), hom_space(B, X), hom_space(A, X)
    n1 = _hom_matrix(hCX, hBX, lambda u: u @ g)
    n2 = _hom_matrix(hBX, hAX, lambda u: u @ f)
    n3 = _ext_matrix(hAX.basis, ext_dim(C, X), lambda u: ext_transport(delta, a=u))
    n4 = _ext_matrix(_basis_classes(C, X), ext_dim(B, X), lambda e: ext_transport(e, c=g))
    out["contra@(B,X)"] = _exact_at(n1, n2, hBX.dim, p)
    out["contra@(A,X)"] = _exact_at(n2, n3, hAX.dim, p)
    out["contra@E(C,X)"] = _exact_at(n3, n4, ext_dim(C, X), p)
    return out


def _theorem_failure(witness: dict, detail: str) -> Verdict:
    return Verdict.inconsistent(witness, detail)


def check_hom_ext_exactness(x: ExCat) -> Verdict:
    cat = x.catalog
    n = 0
    for ci, ai, d, conf in x.conflations():
        for t in x.indices:
            res = hom_ext_sequences(conf, cat.indecs[t])
            n += 1
            bad = [k for k, v in res.items() if not v]
            if bad:
                return _theorem_failure({"conflation": describe_conflation(cat, conf),
                                         "test_object": cat.display_name(t),
                                         "positions": bad}, "Hom–Ext sequence not exact")
    return Verdict.holds(evidence={"checks": n})


def check_ext_round_trip(x: ExCat, caps: Caps = DEFAULT_CAPS) -> Verdict:
    cat = x.catalog
    n = 0
    sampled = False
    for ci in x.indices:
        for ai in x.indices:
            classes, full = ext_classes(cat.indecs[ci], cat.indecs[ai], caps)
            sampled |= not full
            for d in classes:
                n += 1
                if conflation_to_ext(ext_to_conflation(d)) != d:
                    return _theorem_failure({"C": cat.display_name(ci), "A": cat.display_name(ai),
                                             "class": list(d.coords)}, "Ext round trip changed "
                                                                       "the class")
    if sampled:
        return Verdict.unknown("sample_cap", "Ext groups sampled")
    return Verdict.holds(evidence={"classes": n})


def check_et4(x: ExCat, caps: Caps = DEFAULT_CAPS) -> Verdict:
    """(ET4) certificates on composable pairs ``A -> B -> D``, ``B -> C -> F``
    with A, D, F carrier indecomposables (every class, up to ``sample_cap`` pairs)."""
    cat = x.catalog
    n = 0
    for ci, ai, d, c1 in x.conflations():
        for fi in x.indices:
            classes, _ = ext_classes(cat.indecs[fi], c1.B, caps)
            for d2 in classes:
                c2 = ext_to_conflation(d2)
                diag = et4_compose(c1, c2)
                n += 1
                if not diag.ok:
                    bad = [k for k, v in diag.certificates.items() if not v]
                    return _theorem_failure({"first": describe_conflation(cat, c1),
                                             "second": describe_conflation(cat, c2),
                                             "certificates": bad}, "(ET4) certificate failed")
                if n >= caps.sample_cap:
                    return Verdict.holds(evidence={"pairs": n, "truncated": True})
    return Verdict.holds(evidence={"pairs": n, "truncated": False})


def check_wic(x: ExCat, caps: Caps = DEFAULT_CAPS) -> Verdict:
    v = wic_spot_check(x, caps.sample_cap)
    if v.status is Status.FAILS:
        return _theorem_failure(v.witness, "WIC violated in an extension-closed carrier")
    return v


def check_triangle_identities(s: RecollementScenario) -> Verdict:
    for l, r in ADJUNCTIONS:
        adj = s.adj(l, r)
        X, Y = s.cat_of(adj.F.source), s.cat_of(adj.F.target)
        for i in X.indices:
            for j in Y.indices:
                a, b = adj.triangle_identities(X.catalog.indecs[i], Y.catalog.indecs[j])
                if not (a and b):
                    return _theorem_failure({"adjunction": f"({SYMBOLS[l]}, {SYMBOLS[r]})",
                                             "x": X.catalog.display_name(i),
                                             "y": Y.catalog.display_name(j)},
                                            "triangle identity failed")
    return Verdict.holds()


def _preserves(F, src: ExCat, tgt: ExCat, kind: str) -> bool:
    objs = projective_indices(src) if kind == "P" else injective_indices(src)
    good = set(projective_indices(tgt) if kind == "P" else injective_indices(tgt))
    return all(set(tgt.catalog.decompose(F.obj(src.catalog.indecs[i]))) <= good for i in objs)


def check_adjoint_ext_dims(s: RecollementScenario) -> Dict[str, Verdict]:
    """``dim E_B(FX, Y) = dim E_A(X, GY)`` for each adjunction whose hypotheses hold:
    either F exact, projective-preserving, with enough projectives in its source,
    or G exact, injective-preserving, with enough injectives in its source."""
    out = {}
    for l, r in ADJUNCTIONS:
        adj = s.adj(l, r)
        F, G = adj.F, adj.G
        X, Y = s.cat_of(F.source), s.cat_of(F.target)
        key = f"({SYMBOLS[l]}, {SYMBOLS[r]})"
        h1 = (s.exactness(l, "exact").ok and enough_projectives(X).ok
              and _preserves(F, X, Y, "P"))
        h2 = (s.exactness(r, "exact").ok and enough_injectives(Y).ok
              and _preserves(G, Y, X, "I"))
        if not (h1 or h2):
            out[key] = Verdict.skipped({"hypothesis": "neither side of the adjunction is exact "
                                                      "with the required preservation"})
            continue
        bad = None
        for i in X.indices:
            for j in Y.indices:
                x, y = X.catalog.indecs[i], Y.catalog.indecs[j]
                d1, d2 = ext_dim(F.obj(x), y), ext_dim(x, G.obj(y))
                if d1 != d2:
                    bad = {"x": X.catalog.display_name(i), "y": Y.catalog.display_name(j),
                           "dims": [d1, d2]}
                    break
            if bad:
                break
        out[key] = (_theorem_failure({"adjunction": key, **bad}, "Ext dimensions differ")
                    if bad else Verdict.holds(evidence={"via": "projectives" if h1
                                                        else "injectives"}))
    return out


def property_suite(carriers: Dict[str, ExCat], s: Optional[RecollementScenario] = None,
                   caps: Caps = DEFAULT_CAPS) -> Dict[str, Verdict]:
    out: Dict[str, Verdict] = {}
    for name, x in carriers.items():
        out[f"{name}: Hom-Ext exactness"] = _safe(lambda: check_hom_ext_exactness(x))
        out[f"{name}: Ext round trip"] = _safe(lambda: check_ext_round_trip(x, caps))
        out[f"{name}: ET4 certificates"] = _safe(lambda: check_et4(x, caps))
        out[f"{name}: WIC"] = _safe(lambda: check_wic(x, caps))
    if s is not None:
        out["triangle identities"] = _safe(lambda: check_triangle_identities(s))
        for k, v in check_adjoint_ext_dims(s).items():
            out[f"Ext adjunction {k}"] = v
    return out


def _safe(fn) -> Verdict:
    try:
        return fn()
    except CapExceeded as exc:
        return Verdict.unknown(exc.cap, exc.detail)
