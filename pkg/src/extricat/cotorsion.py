"""Cotorsion pairs on a finite catalog: checking, enumeration, gluing along a
recollement, the gluing-theorem conditions, approximation constructions and
restrictions to the outer categories.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin as el
from .exstruct import ExCat, Subcat, describe, describe_conflation, describe_map
from .morphcat import SYMBOLS
from .recollement import (RecollementScenario, enough_injectives, enough_projectives,
                          image_indices, injective_indices, projective_indices)
from .repcat.homext import Conflation, ExtClass, ext_dim, ext_to_conflation, hom_space
from .repcat.rep import DirectSum, Pullback, Pushout, Rep, RepMap, cokernel, kernel
from .verdict import CapExceeded, Caps, DEFAULT_CAPS, Status, Verdict, combine


# ---------------------------------------------------------------------------
# orthogonality
# ---------------------------------------------------------------------------


def ext_orthogonal(T: Subcat, F: Subcat) -> Verdict:
    """``Ext^1(T, F) = 0`` swept over indecomposable generators."""
    cat = T.catalog
    if F.catalog is not cat:
        raise ValueError("subcategories live in different catalogs")
    for t in T.sorted_indices:
        for f in F.sorted_indices:
            d = ext_dim(cat.indecs[t], cat.indecs[f])
            if d:
                delta = ExtClass(cat.indecs[t], cat.indecs[f], (1,) + (0,) * (d - 1))
                conf = ext_to_conflation(delta)
                return Verdict.fails({"T": cat.display_name(t), "F": cat.display_name(f),
                                      "ext_dim": d,
                                      "nonsplit": describe_conflation(cat, conf)})
    return Verdict.holds()


def perp(T: Subcat, carrier: ExCat) -> Subcat:
    """``T^⊥1`` inside the carrier: ``{M : Ext^1(t, M) = 0 for all t}``."""
    cat = T.catalog
    keep = [m for m in carrier.indices
            if all(ext_dim(cat.indecs[t], cat.indecs[m]) == 0 for t in T.indices)]
    return Subcat(cat, keep, f"{T.name}^perp")


def left_perp(F: Subcat, carrier: ExCat) -> Subcat:
    cat = F.catalog
    keep = [m for m in carrier.indices
            if all(ext_dim(cat.indecs[m], cat.indecs[f]) == 0 for f in F.indices)]
    return Subcat(cat, keep, f"perp{F.name}")


# ---------------------------------------------------------------------------
# approximations
# ---------------------------------------------------------------------------

FOUND, NO, NO_BOUND, UNKNOWN = "FOUND", "NO", "NO(bound)", "UNKNOWN"


@dataclass
class Approximation:
    """Outcome of an approximation search for one object.

    ``status`` is FOUND (with ``conflation``), NO (no approximation exists),
    NO(bound) (none within the search bounds) or UNKNOWN (a cap was hit).
    """
    status: str
    side: str
    conflation: Optional[Conflation] = None
    stage: int = -1
    detail: str = ""
    caps_hit: Tuple[str, ...] = ()

    @property
    def found(self) -> bool:
        return self.status == FOUND

    def verdict(self, catalog, obj_name: str) -> Verdict:
        if self.found:
            return Verdict.holds(evidence={"object": obj_name, "stage": self.stage,
                                           "conflation": describe_conflation(catalog,
                                                                             self.conflation)})
        if self.status == NO:
            return Verdict.fails({"object": obj_name, "reason": self.detail})
        return Verdict.unknown(self.caps_hit or ("mult_bound",),
                               f"{obj_name}: {self.status} {self.detail}")


def _weighted_sum_map(maps: Sequence[RepMap], out: bool) -> Tuple[Optional[RepMap], DirectSum]:
    ds = DirectSum([f.source if out else f.target for f in maps])
    return (ds.map_out(maps) if out else ds.map_in(maps)), ds


def _evaluation(gens: Sequence[Rep], C: Rep) -> Optional[RepMap]:
    maps = [f for g in gens for f in hom_space(g, C).basis]
    if not maps:
        return None
    return _weighted_sum_map(maps, True)[0]


def _coevaluation(C: Rep, gens: Sequence[Rep]) -> Optional[RepMap]:
    maps = [f for g in gens for f in hom_space(C, g).basis]
    if not maps:
        return None
    return _weighted_sum_map(maps, False)[0]


def _hom_elements(src: Rep, tgt: Rep, cap: int):
    hs = hom_space(src, tgt)
    if src.p ** hs.dim > cap:
        return None
    return hs.elements()


def right_approximation(C: Rep, T: Subcat, F: Subcat, caps: Caps = DEFAULT_CAPS) -> Approximation:
    """A conflation ``F' -> T' -> C`` with ``T' ∈ T`` and ``F' ∈ F``."""
    if T.contains(C):
        return Approximation(FOUND, "right", Conflation.trivial_right(C), 0, "C lies in T")
    gens = [g for g in T.objects if hom_space(g, C).dim]
    ev = _evaluation(gens, C)
    if ev is None or not ev.is_surjective():
        return Approximation(NO, "right", stage=1,
                             detail="no map from T onto C (evaluation map is not onto)")
    K, k = kernel(ev)
    if F.contains(K):
        return Approximation(FOUND, "right", Conflation(k, ev, check=False), 1)
    # bounded search over multiplicity-capped sums
    limit = C.total_dim + caps.dim_slack
    capped = False
    for mults in _multiplicity_vectors(gens, caps.mult_bound, limit):
        src = DirectSum([g for g, m in zip(gens, mults) for _ in range(m)]).obj
        elems = _hom_elements(src, C, caps.sample_cap)
        if elems is None:
            capped = True
            continue
        for f in elems:
            if not f.is_surjective():
                continue
            K, k = kernel(f)
            if F.contains(K):
                return Approximation(FOUND, "right", Conflation(k, f, check=False), 2)
    if capped:
        return Approximation(UNKNOWN, "right", stage=2, detail="Hom spaces too large to sweep",
                             caps_hit=("sample_cap",))
    return Approximation(NO_BOUND, "right", stage=2,
                         detail=f"multiplicity <= {caps.mult_bound}, dim <= {limit}",
                         caps_hit=("mult_bound", "dim_slack"))


def left_approximation(C: Rep, T: Subcat, F: Subcat, caps: Caps = DEFAULT_CAPS) -> Approximation:
    """A conflation ``C -> F' -> T'`` with ``F' ∈ F`` and ``T' ∈ T``."""
    if F.contains(C):
        return Approximation(FOUND, "left", Conflation.trivial_left(C), 0, "C lies in F")
    gens = [g for g in F.objects if hom_space(C, g).dim]
    co = _coevaluation(C, gens)
    if co is None or not co.is_injective():
        return Approximation(NO, "left", stage=1,
                             detail="no monomorphism from C into F (coevaluation not monic)")
    Q, q = cokernel(co)
    if T.contains(Q):
        return Approximation(FOUND, "left", Conflation(co, q, check=False), 1)
    limit = C.total_dim + caps.dim_slack
    capped = False
    for mults in _multiplicity_vectors(gens, caps.mult_bound, limit):
        tgt = DirectSum([g for g, m in zip(gens, mults) for _ in range(m)]).obj
        elems = _hom_elements(C, tgt, caps.sample_cap)
        if elems is None:
            capped = True
            continue
        for f in elems:
            if not f.is_injective():
                continue
            Q, q = cokernel(f)
            if T.contains(Q):
                return Approximation(FOUND, "left", Conflation(f, q, check=False), 2)
    if capped:
        return Approximation(UNKNOWN, "left", stage=2, detail="Hom spaces too large to sweep",
                             caps_hit=("sample_cap",))
    return Approximation(NO_BOUND, "left", stage=2,
                         detail=f"multiplicity <= {caps.mult_bound}, dim <= {limit}",
                         caps_hit=("mult_bound", "dim_slack"))


def _multiplicity_vectors(gens: Sequence[Rep], bound: int, dim_limit: int):
    """Nonzero multiplicity vectors, ordered by total dimension then lexicographically."""
    dims = [g.total_dim for g in gens]
    vecs = [m for m in itertools.product(range(bound + 1), repeat=len(gens))
            if any(m) and sum(a * d for a, d in zip(m, dims)) <= dim_limit]
    vecs.sort(key=lambda m: (sum(a * d for a, d in zip(m, dims)), m))
    return vecs


# ---------------------------------------------------------------------------
# cotorsion pair check
# ---------------------------------------------------------------------------


@dataclass
class CotorsionReport:
    orthogonal: Verdict
    right: Verdict
    left: Verdict
    T: List[str] = field(default_factory=list)
    F: List[str] = field(default_factory=list)

    @property
    def status(self) -> Status:
        return combine([self.orthogonal, self.right, self.left]).status

    @property
    def is_cotorsion(self) -> bool:
        return self.status is Status.HOLDS

    def to_json(self) -> dict:
        return {"T": self.T, "F": self.F, "a": self.orthogonal.to_json(),
                "b": self.right.to_json(), "c": self.left.to_json(),
                "status": self.status.value}


def _approx_sweep(carrier: ExCat, T: Subcat, F: Subcat, side: str, caps: Caps) -> Verdict:
    cat = carrier.catalog
    fn = right_approximation if side == "right" else left_approximation
    evidence = {}
    pending = []
    for i in carrier.indices:
        name = cat.display_name(i)
        try:
            ap = fn(cat.indecs[i], T, F, caps)
        except CapExceeded as exc:
            pending.append(Verdict.unknown(exc.cap, f"{name}: {exc.detail}"))
            continue
        v = ap.verdict(cat, name)
        if v.status is Status.FAILS:
            return v
        if v.status is Status.UNKNOWN:
            pending.append(v)
        else:
            evidence[name] = v.evidence["conflation"]
    if pending:
        return combine(pending)
    return Verdict.holds(evidence={"conflations": evidence})


def check_cotorsion_pair(T: Subcat, F: Subcat, carrier: ExCat,
                         caps: Caps = DEFAULT_CAPS) -> CotorsionReport:
    for s, lab in ((T, "T"), (F, "F")):
        if not s.indices <= carrier.carrier.indices:
            raise ValueError(f"{lab} is not contained in the carrier")
    a = ext_orthogonal(T, F)
    b = _approx_sweep(carrier, T, F, "right", caps)
    c = _approx_sweep(carrier, T, F, "left", caps)
    return CotorsionReport(a, b, c, T.names(), F.names())


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


@dataclass
class EnumerationResult:
    pairs: List[Tuple[Subcat, Subcat, CotorsionReport]]
    candidates: int
    survivors: int
    n: int

    def to_json(self) -> dict:
        return {"n": self.n, "search_space": 4 ** self.n,
                "candidates_after_filter": self.survivors,
                "pairs": [r.to_json() for _, _, r in self.pairs]}


def enumerate_cotorsion_pairs(carrier: ExCat, caps: Caps = DEFAULT_CAPS) -> EnumerationResult:
    """All cotorsion pairs whose halves are add-closures of carrier indecomposables.

    A pair ``(T, F)`` can only be cotorsion if ``P ⊆ T``, ``I ⊆ F``,
    ``F = T^⊥1`` and ``T = ⊥1F``; in the 2^n × 2^n space of pairs this leaves
    at most one ``F`` per ``T``, computed directly with bitmasks before the
    full check.
    """
    idx = carrier.indices
    n = len(idx)
    if n > caps.subset_limit:
        raise CapExceeded("subset_limit", f"{n} indecomposables exceed the limit "
                                          f"{caps.subset_limit}")
    cat = carrier.catalog
    E = np.array([[ext_dim(cat.indecs[a], cat.indecs[b]) != 0 for b in idx] for a in idx],
                 dtype=bool).reshape(n, n)
    right_mask = [sum(1 << j for j in range(n) if E[i, j]) for i in range(n)]
    left_mask = [sum(1 << i for i in range(n) if E[i, j]) for j in range(n)]
    pos = {c: k for k, c in enumerate(idx)}
    pmask = sum(1 << pos[i] for i in projective_indices(carrier))
    imask = sum(1 << pos[i] for i in injective_indices(carrier))
    full = (1 << n) - 1
    out = []
    survivors = 0
    for tmask in range(1 << n):
        if tmask & pmask != pmask:
            continue
        bad = 0
        for i in range(n):
            if tmask >> i & 1:
                bad |= right_mask[i]
        fmask = full & ~bad
        if fmask & imask != imask:
            continue
        bad_t = 0
        for j in range(n):
            if fmask >> j & 1:
                bad_t |= left_mask[j]
        if (full & ~bad_t) != tmask:
            continue
        survivors += 1
        T = Subcat(cat, [idx[i] for i in range(n) if tmask >> i & 1], "T")
        F = Subcat(cat, [idx[i] for i in range(n) if fmask >> i & 1], "F")
        rep = check_cotorsion_pair(T, F, carrier, caps)
        if rep.status is Status.HOLDS:
            out.append((T, F, rep))
        elif rep.status is Status.UNKNOWN:
            out.append((T, F, rep))
    return EnumerationResult(out, 1 << n, survivors, n)


# ---------------------------------------------------------------------------
# gluing
# ---------------------------------------------------------------------------


@dataclass
class GlueResult:
    T: Subcat
    F: Subcat
    T1: Subcat
    F1: Subcat
    T2: Subcat
    F2: Subcat
    trace: List[dict]

    def to_json(self) -> dict:
        return {"T": self.T.names(), "F": self.F.names(),
                "T_excluded": _complement_names(self.T, self.trace),
                "F_excluded": _complement_names(self.F, self.trace),
                "trace": self.trace}


def _complement_names(s: Subcat, trace) -> List[str]:
    return [t["object"] for t in trace if s.catalog.index_of(t["object"]) not in s.indices]


def glue(T1: Subcat, F1: Subcat, T2: Subcat, F2: Subcat, s: RecollementScenario) -> GlueResult:
    """Glued pair: ``B ∈ T`` iff ``i*B ∈ T1`` and ``j*B ∈ T2``; ``B ∈ F`` iff
    ``i^!B ∈ F1`` and ``j*B ∈ F2``."""
    B = s.B
    cat = B.catalog
    iu, ish, js = s.F("i_star_upper"), s.F("i_shriek"), s.F("j_star")
    t_idx, f_idx, trace = [], [], []
    for b in B.indices:
        m = cat.indecs[b]
        x, y, z = iu.obj(m), js.obj(m), ish.obj(m)
        in_t1, in_t2 = T1.contains(x), T2.contains(y)
        in_f1, in_f2 = F1.contains(z), F2.contains(y)
        if in_t1 and in_t2:
            t_idx.append(b)
        if in_f1 and in_f2:
            f_idx.append(b)
        trace.append({"object": cat.display_name(b),
                      "i^*": describe(T1.catalog, x)["summands"],
                      "j^*": describe(T2.catalog, y)["summands"],
                      "i^!": describe(F1.catalog, z)["summands"],
                      "i^* in T1": in_t1, "j^* in T2": in_t2,
                      "i^! in F1": in_f1, "j^* in F2": in_f2,
                      "in T": in_t1 and in_t2, "in F": in_f1 and in_f2})
    return GlueResult(Subcat(cat, t_idx, "T"), Subcat(cat, f_idx, "F"),
                      T1, F1, T2, F2, trace)


# ---------------------------------------------------------------------------
# gluing-theorem conditions
# ---------------------------------------------------------------------------


@dataclass
class GluingReport:
    hypotheses: Dict[str, Verdict]
    conditions: Dict[str, Verdict]
    final: CotorsionReport
    consistent: bool = True

    @property
    def status(self) -> Status:
        if not self.consistent:
            return Status.INCONSISTENT
        return self.final.status

    def to_json(self) -> dict:
        return {"hypotheses": {k: v.to_json() for k, v in self.hypotheses.items()},
                "conditions": {k: v.to_json() for k, v in self.conditions.items()},
                "glued_pair": self.final.to_json(),
                "consistent": self.consistent,
                "status": self.status.value}


def _condition_iii(g: GlueResult, s: RecollementScenario, caps: Caps) -> Verdict:
    """For all f: i_*A -> j_!T, precomposition Hom(j_!T, F) -> Hom(i_*A, F) is onto."""
    i_low, j_sh = s.F("i_star_lower"), s.F("j_lower_shriek")
    catA, catB = s.A.catalog, s.B.catalog
    p = catB.algebra.p
    sampled = False
    for a in s.A.indices:
        ia = i_low.obj(catA.indecs[a])
        for t in g.T2.sorted_indices:
            jt = j_sh.obj(g.T2.catalog.indecs[t])
            hs = hom_space(ia, jt)
            if p ** hs.dim <= caps.sample_cap:
                fs = list(hs.elements())
            else:
                sampled = True
                fs = hs.basis + [x + y for x, y in itertools.combinations(hs.basis, 2)]
            for fi in g.F.sorted_indices:
                F = catB.indecs[fi]
                h_src, h_tgt = hom_space(jt, F), hom_space(ia, F)
                if h_tgt.dim == 0:
                    continue
                for f in fs:
                    if h_src.dim == 0:
                        r = 0
                    else:
                        m = np.stack([h_tgt.coords(b @ f) for b in h_src.basis], axis=1)
                        r = el.rank(m, p)
                    if r != h_tgt.dim:
                        return Verdict.fails({"A": catA.display_name(a),
                                              "T2": g.T2.catalog.display_name(t),
                                              "F": catB.display_name(fi),
                                              "f": describe_map(catB, f),
                                              "rank": r, "needed": h_tgt.dim})
    if sampled:
        return Verdict.unknown("sample_cap", "Hom(i_*A, j_!T) sampled")
    return Verdict.holds()


def _condition_iv(g: GlueResult, s: RecollementScenario) -> Verdict:
    catB = s.B.catalog
    jl = image_indices(s.F("j_lower_shriek"), s.C, s.B, g.T2.sorted_indices)
    first = g.T.indices <= set(jl)
    if first:
        return Verdict.holds(evidence={"branch": "T in j_!T2"})
    tperp = perp(g.T, s.B)
    i_f1 = image_indices(s.F("i_star_lower"), s.A, s.B, g.F1.sorted_indices)
    outside = [i for i in i_f1 if i not in tperp.indices]
    if not outside:
        return Verdict.holds(evidence={"branch": "i_*F1 in T^perp"})
    off_j = sorted(g.T.indices - set(jl))
    return Verdict.fails({"T_not_in_j_!T2": [catB.display_name(i) for i in off_j],
                          "i_*F1_not_in_T^perp": [catB.display_name(i) for i in outside]})


def _frobenius(x: ExCat) -> Verdict:
    parts = [enough_projectives(x), enough_injectives(x)]
    P, I = projective_indices(x), injective_indices(x)
    if P != I:
        cat = x.catalog
        parts.append(Verdict.fails({"carrier": x.name,
                                    "projectives": [cat.display_name(i) for i in P],
                                    "injectives": [cat.display_name(i) for i in I]}))
    return combine(parts, x.name)


def gluing_conditions(g: GlueResult, s: RecollementScenario,
                         caps: Caps = DEFAULT_CAPS) -> GluingReport:
    hyps = {"B has enough projectives": s.enough_projectives("B"),
            "i^! exact": s.exactness("i_shriek", "exact"),
            "j_! exact": s.exactness("j_lower_shriek", "exact")}
    conds = {
        "i": ext_orthogonal(g.T, g.F),
        "ii": s.exactness("i_star_upper", "exact"),
        "iii": _condition_iii(g, s, caps),
        "iv": _condition_iv(g, s),
        "v": combine([_frobenius(s.A), _frobenius(s.B)]),
    }
    final = check_cotorsion_pair(g.T, g.F, s.B, caps)
    consistent = True
    if all(v.status is Status.HOLDS for v in hyps.values()):
        if any(v.status is Status.HOLDS for v in conds.values()) and \
                final.status is not Status.HOLDS:
            consistent = False
        # under the hypotheses the approximation halves always exist
        if Status.FAILS in (final.right.status, final.left.status):
            consistent = False
    return GluingReport(hyps, conds, final, consistent)


# ---------------------------------------------------------------------------
# constructive approximations for glued pairs
# ---------------------------------------------------------------------------


class GluedApproximationError(RuntimeError):
    def __init__(self, stage: int, detail: str, witness: Optional[dict] = None):
        super().__init__(f"stage {stage}: {detail}")
        self.stage = stage
        self.detail = detail
        self.witness = witness or {}


@dataclass
class GluedApproximation:
    direction: str
    conflation: Conflation
    trace: List[dict]
    certificates: Dict[str, bool]

    def to_json(self, catalog) -> dict:
        return {"direction": self.direction,
                "conflation": describe_conflation(catalog, self.conflation),
                "certificates": self.certificates, "trace": self.trace}


def _need(ap: Approximation, stage: int, what: str) -> Conflation:
    if not ap.found:
        raise GluedApproximationError(stage, f"no {what} ({ap.status}: {ap.detail})")
    return ap.conflation


def glued_approximation(M: Rep, g: GlueResult, s: RecollementScenario, direction: str,
                        caps: Caps = DEFAULT_CAPS) -> GluedApproximation:
    """Build ``F -> T -> M`` (direction b) or ``M -> F -> T`` (direction c) for
    the glued pair by lifting approximations from the outer categories."""
    if direction == "b":
        return _glued_b(M, g, s, caps)
    if direction == "c":
        return _glued_c(M, g, s, caps)
    raise ValueError("direction must be 'b' or 'c'")


def _certify(s: RecollementScenario, g: GlueResult, T: Rep, F: Rep, stage: int) -> Dict[str, bool]:
    iu, ish, js = s.F("i_star_upper"), s.F("i_shriek"), s.F("j_star")
    cert = {"i^*T in T1": g.T1.contains(iu.obj(T)), "j^*T in T2": g.T2.contains(js.obj(T)),
            "i^!F in F1": g.F1.contains(ish.obj(F)), "j^*F in F2": g.F2.contains(js.obj(F)),
            "T in carrier": s.B.contains(T), "F in carrier": s.B.contains(F)}
    bad = [k for k, v in cert.items() if not v]
    if bad:
        raise GluedApproximationError(stage, "membership certificate failed: " + ", ".join(bad),
                                      {"T": describe(s.B.catalog, T),
                                       "F": describe(s.B.catalog, F)})
    return cert


def _glued_b(M, g, s, caps):
    catB = s.B.catalog
    js, jl = s.F("j_star"), s.F("j_lower_star")
    iu, il = s.F("i_star_upper"), s.F("i_star_lower")
    trace = []
    # (1) right approximation of j*M in C
    c2 = _need(right_approximation(js.obj(M), g.T2, g.F2, caps), 1, "right approximation of j^*M")
    trace.append({"stage": 1, "F2": describe(g.F2.catalog, c2.A),
                  "T2": describe(g.T2.catalog, c2.B)})
    # (2) apply j_*
    a2, b2 = jl.mor(c2.incl), jl.mor(c2.proj)
    if not Conflation(a2, b2, check=False).is_exact():
        raise GluedApproximationError(2, "j_* did not carry the conflation to a conflation")
    trace.append({"stage": 2, "j_*T2": describe(catB, b2.source)})
    # (3) H = pullback of j_*T2 -> j_*j^*M <- M along the unit
    eta = s.adj("j_star", "j_lower_star").unit(M)
    pb = Pullback(b2, eta)
    H, h_to_M = pb.obj, pb.py
    if not h_to_M.is_surjective():
        raise GluedApproximationError(3, "H -> M is not a deflation")
    trace.append({"stage": 3, "H": describe(catB, H)})
    # (4) right approximation of i*H in A
    c1 = _need(right_approximation(iu.obj(H), g.T1, g.F1, caps), 4,
               "right approximation of i^*H")
    trace.append({"stage": 4, "F1": describe(g.F1.catalog, c1.A),
                  "T1": describe(g.T1.catalog, c1.B)})
    # (5) T = pullback of i_*T1 -> i_*i^*H <- H along the unit of (i^*, i_*)
    nu = s.adj("i_star_upper", "i_star_lower").unit(H)
    pb2 = Pullback(il.mor(c1.proj), nu)
    T, t_to_H = pb2.obj, pb2.py
    trace.append({"stage": 5, "T": describe(catB, T)})
    # (6) F = ker(T -> H -> M)
    d = h_to_M @ t_to_H
    if not d.is_surjective():
        raise GluedApproximationError(6, "T -> M is not onto")
    F, k = kernel(d)
    conf = Conflation(k, d, check=True)
    trace.append({"stage": 6, "F": describe(catB, F)})
    cert = _certify(s, g, T, F, 6)
    return GluedApproximation("b", conf, trace, cert)


def _glued_c(M, g, s, caps):
    catB = s.B.catalog
    js, jsh = s.F("j_star"), s.F("j_lower_shriek")
    ish, il = s.F("i_shriek"), s.F("i_star_lower")
    trace = []
    # (1) left approximation of j*M in C
    c2 = _need(left_approximation(js.obj(M), g.T2, g.F2, caps), 1, "left approximation of j^*M")
    trace.append({"stage": 1, "F2": describe(g.F2.catalog, c2.B),
                  "T2": describe(g.T2.catalog, c2.C)})
    # (2) apply j_!
    a2, b2 = jsh.mor(c2.incl), jsh.mor(c2.proj)
    if not Conflation(a2, b2, check=False).is_exact():
        raise GluedApproximationError(2, "j_! did not carry the conflation to a conflation")
    trace.append({"stage": 2, "j_!F2": describe(catB, a2.target)})
    # (3) H = pushout of j_!F2 <- j_!j^*M -> M along the counit
    eps = s.adj("j_lower_shriek", "j_star").counit(M)
    po = Pushout(a2, eps)
    H, m_to_H = po.obj, po.iy
    if not m_to_H.is_injective():
        raise GluedApproximationError(3, "M -> H is not an inflation")
    trace.append({"stage": 3, "H": describe(catB, H)})
    # (4) left approximation of i^!H in A
    c1 = _need(left_approximation(ish.obj(H), g.T1, g.F1, caps), 4,
               "left approximation of i^!H")
    trace.append({"stage": 4, "F1": describe(g.F1.catalog, c1.B),
                  "T1": describe(g.T1.catalog, c1.C)})
    # (5) F = pushout of i_*F1 <- i_*i^!H -> H along the counit of (i_*, i^!)
    eps_h = s.adj("i_star_lower", "i_shriek").counit(H)
    po2 = Pushout(il.mor(c1.incl), eps_h)
    F, h_to_F = po2.obj, po2.iy
    trace.append({"stage": 5, "F": describe(catB, F)})
    # (6) T = coker(M -> H -> F)
    e = h_to_F @ m_to_H
    if not e.is_injective():
        raise GluedApproximationError(6, "M -> F is not monic")
    T, q = cokernel(e)
    conf = Conflation(e, q, check=True)
    trace.append({"stage": 6, "T": describe(catB, T)})
    cert = _certify(s, g, T, F, 6)
    return GluedApproximation("c", conf, trace, cert)


# ---------------------------------------------------------------------------
# restriction to the outer categories
# ---------------------------------------------------------------------------


@dataclass
class RestrictResult:
    via: str
    U: Subcat
    V: Subcat
    input_report: CotorsionReport
    preconditions: Dict[str, Verdict]
    report: CotorsionReport
    consistent: bool = True

    @property
    def status(self) -> Status:
        if not self.consistent:
            return Status.INCONSISTENT
        return self.report.status

    def to_json(self) -> dict:
        return {"via": self.via, "U": self.U.names(), "V": self.V.names(),
                "input": self.input_report.to_json(),
                "preconditions": {k: v.to_json() for k, v in self.preconditions.items()},
                "restricted": self.report.to_json(),
                "consistent": self.consistent, "status": self.status.value}


def _closure_check(s: RecollementScenario, X: Subcat, first: str, second: str) -> Verdict:
    """``second ∘ first`` maps every indecomposable of X back into X."""
    Fa, Fb = s.F(first), s.F(second)
    catB = s.B.catalog
    for i in X.sorted_indices:
        img = Fb.obj(Fa.obj(catB.indecs[i]))
        if not X.contains(img):
            return Verdict.fails({"object": catB.display_name(i),
                                  "image": describe(catB, img),
                                  "functor": SYMBOLS[second] + SYMBOLS[first]})
    return Verdict.holds()


def restrict_pair(U: Subcat, V: Subcat, via: str, s: RecollementScenario,
                  caps: Caps = DEFAULT_CAPS) -> RestrictResult:
    inp = check_cotorsion_pair(U, V, s.B, caps)
    if via == "i":
        pre = {"i_*i^!U in U": _closure_check(s, U, "i_shriek", "i_star_lower"),
               "i_*i^*U in U": _closure_check(s, U, "i_star_upper", "i_star_lower")}
        gate = all(v.status is Status.HOLDS for v in pre.values())
        target = s.A
        U2 = Subcat(target.catalog, image_indices(s.F("i_star_upper"), s.B, target,
                                                  U.sorted_indices), "i^*U")
        V2 = Subcat(target.catalog, image_indices(s.F("i_shriek"), s.B, target,
                                                  V.sorted_indices), "i^!V")
    elif via == "j":
        pre = {"j_*j^*V in V": _closure_check(s, V, "j_star", "j_lower_star"),
               "j_!j^*U in U": _closure_check(s, U, "j_star", "j_lower_shriek")}
        gate = any(v.status is Status.HOLDS for v in pre.values())
        target = s.C
        U2 = Subcat(target.catalog, image_indices(s.F("j_star"), s.B, target,
                                                  U.sorted_indices), "j^*U")
        V2 = Subcat(target.catalog, image_indices(s.F("j_star"), s.B, target,
                                                  V.sorted_indices), "j^*V")
    else:
        raise ValueError("via must be 'i' or 'j'")
    # images outside the target carrier cannot form a pair there
    U2 = Subcat(U2.catalog, U2.indices & target.carrier.indices, U2.name)
    V2 = Subcat(V2.catalog, V2.indices & target.carrier.indices, V2.name)
    rep = check_cotorsion_pair(U2, V2, target, caps)
    consistent = not (inp.status is Status.HOLDS and gate and rep.status is Status.FAILS)
    return RestrictResult(via, U2, V2, inp, pre, rep, consistent)
