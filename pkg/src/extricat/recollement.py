"""Verification of recollement axioms and their standard consequences.

A :class:`RecollementScenario` bundles three carriers (left ``A``, middle
``B``, right ``C``), the six functors and the caps.  Every check sweeps the
catalog indecomposables of the relevant carriers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin as el
from .exstruct import (ExCat, Subcat, describe, describe_conflation, describe_map,
                       exact_sequence_check, ext_classes, functor_exactness)
from .morphcat import ADJUNCTIONS, SYMBOLS, Adjunction, AdjunctionError, FunctorHandle
from .repcat.homext import Conflation, ext_dim, ext_to_conflation, hom_space
from .repcat.rep import DirectSum, Rep, RepMap, cokernel, kernel
from .verdict import CapExceeded, Caps, DEFAULT_CAPS, Status, Verdict, combine

EXACTNESS_TYPES = {"i_star_lower": "exact", "j_star": "exact",
                   "i_star_upper": "right", "j_lower_shriek": "right",
                   "i_shriek": "left", "j_lower_star": "left"}


class RecollementScenario:
    def __init__(self, A: ExCat, B: ExCat, C: ExCat, functors: Dict[str, FunctorHandle],
                 caps: Caps = DEFAULT_CAPS, name: str = ""):
        self.cats = {"A": A, "B": B, "C": C}
        self.A, self.B, self.C = A, B, C
        self.functors = functors
        self.caps = caps
        self.name = name
        self._exactness: Dict[Tuple[str, str], Verdict] = {}
        self._proj: Dict[str, Tuple] = {}

    def F(self, tag: str) -> FunctorHandle:
        return self.functors[tag]

    def cat_of(self, side: str) -> ExCat:
        return self.cats[side]

    @cached_property
    def adjunctions(self) -> Dict[Tuple[str, str], Adjunction]:
        return {(l, r): Adjunction(self.functors[l], self.functors[r]) for l, r in ADJUNCTIONS}

    def adj(self, left: str, right: str) -> Adjunction:
        return self.adjunctions[(left, right)]

    def exactness(self, tag: str, mode: str) -> Verdict:
        key = (tag, mode)
        if key not in self._exactness:
            F = self.functors[tag]
            self._exactness[key] = functor_exactness(F, mode, self.cat_of(F.source),
                                                     self.cat_of(F.target), self.caps)
        return self._exactness[key]

    # projective / injective objects of a carrier ------------------------
    def projectives(self, side: str) -> List[int]:
        return projective_indices(self.cat_of(side))

    def injectives(self, side: str) -> List[int]:
        return injective_indices(self.cat_of(side))

    def enough_projectives(self, side: str) -> Verdict:
        return enough_projectives(self.cat_of(side))

    def enough_injectives(self, side: str) -> Verdict:
        return enough_injectives(self.cat_of(side))


# ---------------------------------------------------------------------------
# projectives and injectives inside a carrier
# ---------------------------------------------------------------------------


def projective_indices(x: ExCat) -> List[int]:
    """Carrier indecomposables P with Ext^1(P, K) = 0 for every carrier K."""
    cat = x.catalog
    return [i for i in x.indices
            if all(ext_dim(cat.indecs[i], cat.indecs[k]) == 0 for k in x.indices)]


def injective_indices(x: ExCat) -> List[int]:
    cat = x.catalog
    return [i for i in x.indices
            if all(ext_dim(cat.indecs[k], cat.indecs[i]) == 0 for k in x.indices)]


def _evaluation_map(sources: Sequence[Rep], m: Rep) -> Optional[RepMap]:
    maps = []
    for s in sources:
        maps.extend(hom_space(s, m).basis)
    if not maps:
        return None
    ds = DirectSum([f.source for f in maps])
    return ds.map_out(maps)


def _coevaluation_map(m: Rep, targets: Sequence[Rep]) -> Optional[RepMap]:
    maps = []
    for t in targets:
        maps.extend(hom_space(m, t).basis)
    if not maps:
        return None
    ds = DirectSum([f.target for f in maps])
    return ds.map_in(maps)


def enough_projectives(x: ExCat) -> Verdict:
    """The evaluation map from projectives onto each object is a deflation."""
    cat = x.catalog
    projs = [cat.indecs[i] for i in projective_indices(x)]
    for i in x.indices:
        m = cat.indecs[i]
        ev = _evaluation_map(projs, m)
        if ev is None or not ev.is_surjective():
            return Verdict.fails({"object": cat.display_name(i),
                                  "reason": "evaluation map from projectives is not onto"})
        k, _ = kernel(ev)
        try:
            ok = x.contains(k)
        except CapExceeded as exc:
            return Verdict.unknown(exc.cap, exc.detail)
        if not ok:
            return Verdict.fails({"object": cat.display_name(i),
                                  "reason": "kernel of the evaluation map leaves the carrier",
                                  "kernel": describe(cat, k)})
    return Verdict.holds()


def enough_injectives(x: ExCat) -> Verdict:
    cat = x.catalog
    injs = [cat.indecs[i] for i in injective_indices(x)]
    for i in x.indices:
        m = cat.indecs[i]
        co = _coevaluation_map(m, injs)
        if co is None or not co.is_injective():
            return Verdict.fails({"object": cat.display_name(i),
                                  "reason": "coevaluation map into injectives is not monic"})
        c, _ = cokernel(co)
        try:
            ok = x.contains(c)
        except CapExceeded as exc:
            return Verdict.unknown(exc.cap, exc.detail)
        if not ok:
            return Verdict.fails({"object": cat.display_name(i),
                                  "reason": "cokernel of the coevaluation map leaves the carrier",
                                  "cokernel": describe(cat, c)})
    return Verdict.holds()


def image_indices(F: FunctorHandle, src: ExCat, tgt: ExCat, indices: Sequence[int]) -> List[int]:
    """Catalog indices (in the target) of the summands of F applied to objects."""
    out = set()
    for i in indices:
        out |= set(tgt.catalog.decompose(F.obj(src.catalog.indecs[i])))
    return sorted(out)


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


@dataclass
class RecollementReport:
    axioms: Dict[str, Verdict] = field(default_factory=dict)
    consequences: Dict[str, Verdict] = field(default_factory=dict)
    transfer: Dict[str, Verdict] = field(default_factory=dict)
    notes: Dict[str, object] = field(default_factory=dict)

    def all_verdicts(self) -> List[Verdict]:
        return list(self.axioms.values()) + list(self.consequences.values()) + \
            list(self.transfer.values())

    def status(self) -> Status:
        sts = {v.status for v in self.all_verdicts()}
        for s in (Status.INCONSISTENT, Status.FAILS, Status.UNKNOWN):
            if s in sts:
                return s
        return Status.HOLDS

    def to_json(self) -> dict:
        return {"axioms": {k: v.to_json() for k, v in self.axioms.items()},
                "consequences": {k: v.to_json() for k, v in self.consequences.items()},
                "transfer": {k: v.to_json() for k, v in self.transfer.items()},
                "notes": self.notes,
                "status": self.status().value}


def _guard(fn):
    """Run a check; AdjunctionError becomes FAILS, CapExceeded becomes UNKNOWN."""
    try:
        return fn()
    except AdjunctionError as exc:
        return Verdict.fails({"reason": str(exc), **exc.witness})
    except CapExceeded as exc:
        return Verdict.unknown(exc.cap, exc.detail)


# ---------------------------------------------------------------------------
# (R1) - (R5)
# ---------------------------------------------------------------------------


def check_functor_types(s: RecollementScenario) -> Verdict:
    out = []
    for tag, mode in EXACTNESS_TYPES.items():
        v = s.exactness(tag, mode)
        if v.status is not Status.HOLDS:
            out.append(Verdict(v.status, witness={"functor": SYMBOLS[tag], "mode": mode,
                                                  "detail": v.witness},
                               caps_hit=v.caps_hit))
    return combine(out, "functor exactness types")


def _adjunction_checks(s: RecollementScenario, left: str, right: str) -> Verdict:
    adj = s.adj(left, right)
    F, G = adj.F, adj.G
    X, Y = s.cat_of(F.source), s.cat_of(F.target)
    cap = s.caps.naturality_cap
    lab = f"({SYMBOLS[left]}, {SYMBOLS[right]})"
    for i in X.indices:
        x = X.catalog.indecs[i]
        for j in Y.indices:
            y = Y.catalog.indecs[j]
            d1 = hom_space(F.obj(x), y).dim
            d2 = hom_space(x, G.obj(y)).dim
            if d1 != d2:
                return Verdict.fails({"adjunction": lab, "reason": "Hom dimensions differ",
                                      "x": X.catalog.display_name(i),
                                      "y": Y.catalog.display_name(j), "dims": [d1, d2]})
    # units: naturality and triangle identities
    for i in X.indices:
        x = X.catalog.indecs[i]
        eta_x = adj.unit(x)
        for k in X.indices:
            x2 = X.catalog.indecs[k]
            eta_x2 = adj.unit(x2)
            for g in hom_space(x, x2).basis[:cap]:
                if not (eta_x2 @ g == G.mor(F.mor(g)) @ eta_x):
                    return Verdict.fails({"adjunction": lab, "reason": "unit not natural",
                                          "map": describe_map(X.catalog, g)})
        fx = F.obj(x)
        if not (adj.counit(fx) @ F.mor(eta_x) == RepMap.identity(fx)):
            return Verdict.fails({"adjunction": lab, "reason": "triangle identity fails",
                                  "object": X.catalog.display_name(i)})
    for j in Y.indices:
        y = Y.catalog.indecs[j]
        eps_y = adj.counit(y)
        for k in Y.indices:
            y2 = Y.catalog.indecs[k]
            eps_y2 = adj.counit(y2)
            for h in hom_space(y, y2).basis[:cap]:
                if not (h @ eps_y == eps_y2 @ F.mor(G.mor(h))):
                    return Verdict.fails({"adjunction": lab, "reason": "counit not natural",
                                          "map": describe_map(Y.catalog, h)})
        gy = G.obj(y)
        if not (G.mor(eps_y) @ adj.unit(gy) == RepMap.identity(gy)):
            return Verdict.fails({"adjunction": lab, "reason": "triangle identity fails",
                                  "object": Y.catalog.display_name(j)})
    return Verdict.holds()


def check_carriers(s: RecollementScenario) -> Verdict:
    """Each functor maps its source carrier into its target carrier."""
    for tag, F in s.functors.items():
        src, tgt = s.cat_of(F.source), s.cat_of(F.target)
        for i in src.indices:
            img = F.obj(src.catalog.indecs[i])
            if not tgt.contains(img):
                return Verdict.fails({"functor": SYMBOLS[tag],
                                      "object": src.catalog.display_name(i),
                                      "image": describe(tgt.catalog, img)})
    return Verdict.holds()


def check_r1(s: RecollementScenario) -> Verdict:
    parts = [_guard(lambda: check_carriers(s))]
    for l, r in ADJUNCTIONS:
        parts.append(_guard(lambda l=l, r=r: _adjunction_checks(s, l, r)))
    return combine(parts, "adjoint triples")


def check_r2(s: RecollementScenario) -> Verdict:
    A, B = s.A, s.B
    im = set(image_indices(s.F("i_star_lower"), A, B, A.indices))
    ker = {i for i in B.indices if s.F("j_star").obj(B.catalog.indecs[i]).is_zero()}
    names = lambda ix: sorted(B.catalog.display_name(i) for i in ix)
    if im == ker:
        return Verdict.holds(evidence={"Im i_*": names(im)})
    return Verdict.fails({"Im i_*": names(im), "Ker j^*": names(ker)})


def check_r3(s: RecollementScenario) -> Verdict:
    p = s.B.catalog.algebra.p
    for tag in ("i_star_lower", "j_lower_shriek", "j_lower_star"):
        F = s.F(tag)
        X = s.cat_of(F.source)
        for i in X.indices:
            for k in X.indices:
                x, x2 = X.catalog.indecs[i], X.catalog.indecs[k]
                hs = hom_space(x, x2)
                ht = hom_space(F.obj(x), F.obj(x2))
                if hs.dim != ht.dim:
                    return Verdict.fails({"functor": SYMBOLS[tag], "pair": [
                        X.catalog.display_name(i), X.catalog.display_name(k)],
                        "dims": [hs.dim, ht.dim]})
                if hs.dim:
                    m = np.stack([ht.coords(F.mor(b)) for b in hs.basis], axis=1)
                    if el.rank(m, p) != hs.dim:
                        return Verdict.fails({"functor": SYMBOLS[tag], "reason": "not injective",
                                              "pair": [X.catalog.display_name(i),
                                                       X.catalog.display_name(k)]})
    return Verdict.holds()


def r4_sequence(s: RecollementScenario, X: Rep):
    """``i_*i^!X -θ-> X -ϑ-> j_*j^*X -h-> i_*A`` and the object A."""
    theta = s.adj("i_star_lower", "i_shriek").counit(X)
    vartheta = s.adj("j_star", "j_lower_star").unit(X)
    D, h = cokernel(vartheta)
    A = s.F("i_shriek").obj(D)
    return theta, vartheta, h, D, A


def r5_sequence(s: RecollementScenario, X: Rep):
    """``i_*A' -k-> j_!j^*X -υ-> X -ν-> i_*i^*X`` and the object A'."""
    upsilon = s.adj("j_lower_shriek", "j_star").counit(X)
    nu = s.adj("i_star_upper", "i_star_lower").unit(X)
    K, k = kernel(upsilon)
    A1 = s.F("i_shriek").obj(K)
    return k, upsilon, nu, K, A1


def _in_image_of_i(s: RecollementScenario, D: Rep, A: Rep) -> bool:
    return s.F("j_star").obj(D).is_zero() and s.F("i_star_lower").obj(A) == D \
        and s.A.contains(A)


def check_r4(s: RecollementScenario) -> Verdict:
    B = s.B
    used = {}
    for i in B.indices:
        X = B.catalog.indecs[i]
        try:
            theta, vartheta, h, D, A = r4_sequence(s, X)
        except AdjunctionError as exc:
            return Verdict.fails({"object": B.catalog.display_name(i), "reason": str(exc),
                                  **exc.witness})
        if not _in_image_of_i(s, D, A):
            return Verdict.fails({"object": B.catalog.display_name(i),
                                  "reason": "fourth term is not of the form i_*A",
                                  "fourth": describe(B.catalog, D)})
        v = exact_sequence_check([theta, vartheta, h], "left", B)
        if v.status is not Status.HOLDS:
            return Verdict(v.status, witness={"object": B.catalog.display_name(i),
                                              "check": v.witness}, caps_hit=v.caps_hit)
        used[B.catalog.display_name(i)] = describe(s.A.catalog, A)["summands"]
    return Verdict.holds(evidence={"A": used})


def check_r5(s: RecollementScenario) -> Verdict:
    B = s.B
    used = {}
    for i in B.indices:
        X = B.catalog.indecs[i]
        try:
            k, upsilon, nu, K, A1 = r5_sequence(s, X)
        except AdjunctionError as exc:
            return Verdict.fails({"object": B.catalog.display_name(i), "reason": str(exc),
                                  **exc.witness})
        if not _in_image_of_i(s, K, A1):
            return Verdict.fails({"object": B.catalog.display_name(i),
                                  "reason": "first term is not of the form i_*A'",
                                  "first": describe(B.catalog, K)})
        v = exact_sequence_check([k, upsilon, nu], "right", B)
        if v.status is not Status.HOLDS:
            return Verdict(v.status, witness={"object": B.catalog.display_name(i),
                                              "check": v.witness}, caps_hit=v.caps_hit)
        used[B.catalog.display_name(i)] = describe(s.A.catalog, A1)["summands"]
    return Verdict.holds(evidence={"A'": used})


def verify_axioms(s: RecollementScenario) -> RecollementReport:
    rep = RecollementReport()
    rep.axioms["functors"] = _guard(lambda: check_functor_types(s))
    rep.axioms["R1"] = check_r1(s)
    rep.axioms["R2"] = _guard(lambda: check_r2(s))
    rep.axioms["R3"] = _guard(lambda: check_r3(s))
    rep.axioms["R4"] = _guard(lambda: check_r4(s))
    rep.axioms["R5"] = _guard(lambda: check_r5(s))
    return rep


# ---------------------------------------------------------------------------
# consequences of the axioms
# ---------------------------------------------------------------------------


def _gate(hyps: Sequence[Tuple[str, Verdict]]) -> Optional[Verdict]:
    """SKIPPED verdict if some hypothesis does not hold, else None."""
    for name, v in hyps:
        if v.status is not Status.HOLDS:
            return Verdict.skipped({"hypothesis": name, "status": v.status.value,
                                    "witness": v.witness})
    return None


def _preserves(s: RecollementScenario, tag: str, kind: str) -> Verdict:
    F = s.F(tag)
    src, tgt = s.cat_of(F.source), s.cat_of(F.target)
    good = set(projective_indices(tgt) if kind == "projective" else injective_indices(tgt))
    objs = projective_indices(src) if kind == "projective" else injective_indices(src)
    for i in objs:
        img = F.obj(src.catalog.indecs[i])
        if not set(tgt.catalog.decompose(img)) <= good:
            return Verdict.fails({"functor": SYMBOLS[tag], "object": src.catalog.display_name(i),
                                  "image": describe(tgt.catalog, img),
                                  "reason": f"image is not {kind}"})
    return Verdict.holds()


def _add_image_equals(s: RecollementScenario, tag: str, side_src: str, side_tgt: str,
                      kind: str) -> Verdict:
    F = s.F(tag)
    src, tgt = s.cat_of(side_src), s.cat_of(side_tgt)
    objs = projective_indices(src) if kind == "projective" else injective_indices(src)
    img = set(image_indices(F, src, tgt, objs))
    want = set(projective_indices(tgt) if kind == "projective" else injective_indices(tgt))
    names = lambda ix: sorted(tgt.catalog.display_name(i) for i in ix)
    if img == want:
        return Verdict.holds(evidence={"add": names(img)})
    return Verdict.fails({"image": names(img), "expected": names(want), "functor": SYMBOLS[tag]})


def _ext_iso(s: RecollementScenario, left_tag: str, right_tag: str) -> Verdict:
    """dim E_B(L Z, Y) = dim E(Z, R Y) over carrier indecomposables."""
    L, R = s.F(left_tag), s.F(right_tag)
    src, B = s.cat_of(L.source), s.B
    for i in src.indices:
        z = src.catalog.indecs[i]
        for j in B.indices:
            y = B.catalog.indecs[j]
            d1 = ext_dim(L.obj(z), y)
            d2 = ext_dim(z, R.obj(y))
            if d1 != d2:
                return Verdict.fails({"pair": [src.catalog.display_name(i),
                                               B.catalog.display_name(j)], "dims": [d1, d2]})
    return Verdict.holds()


def consequence_suite(s: RecollementScenario, axioms: Optional[RecollementReport] = None
                  ) -> Dict[str, Verdict]:
    ex = s.exactness
    out: Dict[str, Verdict] = {}

    def item(key, hyps, fn):
        g = _gate(hyps)
        out[key] = g if g is not None else _guard(fn)

    def nat_isos():
        checks = [("i_star_upper", "i_star_lower", "counit", s.A),
                  ("i_star_lower", "i_shriek", "unit", s.A),
                  ("j_lower_shriek", "j_star", "unit", s.C),
                  ("j_star", "j_lower_star", "counit", s.C)]
        for l, r, which, X in checks:
            adj = s.adj(l, r)
            for i in X.indices:
                x = X.catalog.indecs[i]
                m = adj.unit(x) if which == "unit" else adj.counit(x)
                if not m.is_iso():
                    return Verdict.fails({"adjunction": f"({SYMBOLS[l]}, {SYMBOLS[r]})",
                                          "which": which, "object": X.catalog.display_name(i)})
        return Verdict.holds()

    def vanishing():
        for a, b in (("i_star_upper", "j_lower_shriek"), ("i_shriek", "j_lower_star")):
            for i in s.C.indices:
                z = s.C.catalog.indecs[i]
                img = s.F(a).obj(s.F(b).obj(z))
                if not img.is_zero():
                    return Verdict.fails({"composite": SYMBOLS[a] + SYMBOLS[b],
                                          "object": s.C.catalog.display_name(i),
                                          "image_dims": list(img.dims)})
        return Verdict.holds()

    enough_pB = s.enough_projectives("B")
    enough_iB = s.enough_injectives("B")
    enough_pC = s.enough_projectives("C")

    item("1", [], nat_isos)
    item("2", [], vanishing)
    item("3", [], lambda: combine([_preserves(s, "i_star_upper", "projective"),
                                   _preserves(s, "i_shriek", "injective")]))
    item("3'", [], lambda: combine([_preserves(s, "j_lower_shriek", "projective"),
                                    _preserves(s, "j_lower_star", "injective")]))
    item("4.i", [("i^! exact", ex("i_shriek", "exact"))],
         lambda: _preserves(s, "i_star_lower", "projective"))
    item("4.j", [("j_* exact", ex("j_lower_star", "exact"))],
         lambda: _preserves(s, "j_star", "projective"))
    item("4'.i", [("i^* exact", ex("i_star_upper", "exact"))],
         lambda: _preserves(s, "i_star_lower", "injective"))
    item("4'.j", [("j_! exact", ex("j_lower_shriek", "exact"))],
         lambda: _preserves(s, "j_star", "injective"))
    item("5.P", [("B has enough projectives", enough_pB)],
         lambda: combine([s.enough_projectives("A"),
                          _add_image_equals(s, "i_star_upper", "B", "A", "projective")]))
    item("5.I", [("B has enough injectives", enough_iB)],
         lambda: combine([s.enough_injectives("A"),
                          _add_image_equals(s, "i_shriek", "B", "A", "injective")]))
    item("6.P", [("B has enough projectives", enough_pB), ("j_* exact",
                                                            ex("j_lower_star", "exact"))],
         lambda: combine([s.enough_projectives("C"),
                          _add_image_equals(s, "j_star", "B", "C", "projective")]))
    item("6.I", [("B has enough injectives", enough_iB), ("j_! exact",
                                                           ex("j_lower_shriek", "exact"))],
         lambda: combine([s.enough_injectives("C"),
                          _add_image_equals(s, "j_star", "B", "C", "injective")]))
    item("7", [("B has enough projectives", enough_pB), ("i^! exact", ex("i_shriek", "exact"))],
         lambda: _ext_iso(s, "i_star_lower", "i_shriek"))
    item("7'", [("C has enough projectives", enough_pC),
                ("j_! exact", ex("j_lower_shriek", "exact"))],
         lambda: _ext_iso(s, "j_lower_shriek", "j_star"))
    item("8", [("i^* exact", ex("i_star_upper", "exact"))],
         lambda: ex("j_lower_shriek", "exact"))
    item("8'", [("i^! exact", ex("i_shriek", "exact"))],
         lambda: ex("j_lower_star", "exact"))

    axioms_ok = axioms is not None and all(
        v.status is Status.HOLDS for v in axioms.axioms.values())
    if axioms_ok:
        for k, v in list(out.items()):
            if v.status is Status.FAILS:
                out[k] = Verdict.inconsistent({"item": k, "witness": v.witness},
                                              "axioms hold but a consequence fails")
    return out


def transfer_check(s: RecollementScenario, axioms: Optional[RecollementReport] = None
                 ) -> Dict[str, Verdict]:
    out: Dict[str, Verdict] = {}
    B = s.B

    def part1():
        for i in B.indices:
            X = B.catalog.indecs[i]
            theta, vartheta, _, _, _ = r4_sequence(s, X)
            c = Conflation(theta, vartheta, check=False)
            if not (c.is_exact() and all(B.contains(o) for o in (c.A, c.B, c.C))):
                return Verdict.fails({"object": B.catalog.display_name(i),
                                      "sequence": describe_conflation(B.catalog, c)})
        return Verdict.holds()

    def part2():
        for i in B.indices:
            X = B.catalog.indecs[i]
            _, upsilon, nu, _, _ = r5_sequence(s, X)
            c = Conflation(upsilon, nu, check=False)
            if not (c.is_exact() and all(B.contains(o) for o in (c.A, c.B, c.C))):
                return Verdict.fails({"object": B.catalog.display_name(i),
                                      "sequence": describe_conflation(B.catalog, c)})
        return Verdict.holds()

    for key, hyp, fn in (("1", ("i^! exact", s.exactness("i_shriek", "exact")), part1),
                         ("2", ("i^* exact", s.exactness("i_star_upper", "exact")), part2)):
        g = _gate([hyp])
        out[key] = g if g is not None else _guard(fn)
    axioms_ok = axioms is not None and all(
        v.status is Status.HOLDS for v in axioms.axioms.values())
    if axioms_ok:
        for k, v in list(out.items()):
            if v.status is Status.FAILS:
                out[k] = Verdict.inconsistent({"item": k, "witness": v.witness},
                                              "axioms hold but the proposition fails")
    return out


def full_report(s: RecollementScenario) -> RecollementReport:
    rep = verify_axioms(s)
    rep.consequences = consequence_suite(s, rep)
    rep.transfer = transfer_check(s, rep)
    rep.notes = {
        "projectives": {k: [s.cat_of(k).catalog.display_name(i) for i in s.projectives(k)]
                        for k in "ABC"},
        "injectives": {k: [s.cat_of(k).catalog.display_name(i) for i in s.injectives(k)]
                       for k in "ABC"},
    }
    return rep
