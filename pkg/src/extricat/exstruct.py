"""Extriangulated structure on extension-closed subcategories of mod Λ.

The E-bifunctor of a carrier is the ambient Ext^1 restricted to it, and the
realization of a class is its pushout conflation.  Inflations, deflations
and one-sided exact sequences are decided by kernel/cokernel computations
plus carrier membership.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin as el
from .repcat.catalog import Catalog, CatalogMiss
from .repcat.homext import (Conflation, ExtClass, conflation_to_ext, ext_space,
                            ext_to_conflation, ext_transport, hom_space)
from .repcat.rep import Rep, RepMap, cokernel, factor_through_epi, factor_through_mono, kernel
from .verdict import CapExceeded, Caps, DEFAULT_CAPS, Status, Verdict, combine


class Subcat:
    """The additive closure of a set of catalog indecomposables."""

    def __init__(self, catalog: Catalog, indices: Iterable[int], name: str = ""):
        self.catalog = catalog
        self.indices: FrozenSet[int] = frozenset(int(i) for i in indices)
        bad = [i for i in self.indices if not 0 <= i < len(catalog)]
        if bad:
            raise ValueError(f"indices {bad} are not catalog members")
        self.name = name

    @classmethod
    def full(cls, catalog: Catalog, name: str = "") -> "Subcat":
        return cls(catalog, range(len(catalog)), name)

    @classmethod
    def from_names(cls, catalog: Catalog, names: Iterable[str], name: str = "") -> "Subcat":
        return cls(catalog, catalog.resolve(names), name)

    @property
    def sorted_indices(self) -> List[int]:
        return sorted(self.indices)

    @property
    def objects(self) -> List[Rep]:
        return [self.catalog.indecs[i] for i in self.sorted_indices]

    def names(self) -> List[str]:
        return [self.catalog.display_name(i) for i in self.sorted_indices]

    def contains(self, m: Rep) -> bool:
        """Membership of an arbitrary object (decompose, then subset test)."""
        if m.is_zero():
            return True
        try:
            return set(self.catalog.decompose(m)) <= self.indices
        except CatalogMiss:
            return False

    def membership(self, m: Rep) -> Verdict:
        try:
            ok = self.contains(m)
        except CapExceeded as exc:
            return Verdict.unknown(exc.cap, exc.detail)
        if ok:
            return Verdict.holds()
        return Verdict.fails({"object": describe(self.catalog, m), "subcategory": self.name})

    def __contains__(self, m: Rep) -> bool:
        return self.contains(m)

    def __le__(self, other: "Subcat") -> bool:
        return self.indices <= other.indices

    def __eq__(self, other):
        return isinstance(other, Subcat) and self.catalog is other.catalog \
            and self.indices == other.indices

    def __hash__(self):
        return hash((id(self.catalog), self.indices))

    def __len__(self):
        return len(self.indices)

    def __repr__(self):
        return f"Subcat({self.name or ''}{self.names()})"


def describe(catalog: Catalog, m: Rep) -> dict:
    """A named description of an object: its decomposition into catalog names."""
    if m.is_zero():
        return {"dims": list(m.dims), "summands": []}
    try:
        dec = catalog.decompose(m)
        summands = [[catalog.display_name(i), k] for i, k in sorted(dec.items())]
    except (CatalogMiss, CapExceeded):
        summands = None
    return {"dims": list(m.dims), "summands": summands}


def describe_map(catalog: Catalog, f: RepMap) -> dict:
    return {"source": describe(catalog, f.source), "target": describe(catalog, f.target),
            "comps": [c.tolist() for c in f.comps]}


def describe_conflation(catalog: Catalog, c: Conflation) -> dict:
    return {"A": describe(catalog, c.A), "B": describe(catalog, c.B), "C": describe(catalog, c.C)}


class ExCat:
    """An extension-closed carrier inside the module category of a catalog."""

    def __init__(self, carrier: Subcat, name: str = "", caps: Caps = DEFAULT_CAPS):
        self.carrier = carrier
        self.catalog = carrier.catalog
        self.name = name or carrier.name
        self.caps = caps
        self._closed: Optional[Verdict] = None

    @property
    def indecs(self) -> List[Rep]:
        return self.carrier.objects

    @property
    def indices(self) -> List[int]:
        return self.carrier.sorted_indices

    def contains(self, m: Rep) -> bool:
        return self.carrier.contains(m)

    def is_full(self) -> bool:
        return len(self.carrier) == len(self.catalog)

    def extension_closed(self) -> Verdict:
        if self._closed is None:
            self._closed = check_extension_closed(self.carrier, self.caps)
        return self._closed

    def describe(self, m: Rep) -> dict:
        return describe(self.catalog, m)

    # conflation sweeps ----------------------------------------------------
    def classes(self, C: Rep, A: Rep) -> Tuple[List[ExtClass], bool]:
        """All Ext classes (complete=True) or basis + pairwise sums (False)."""
        return ext_classes(C, A, self.caps)

    def conflations(self) -> Iterator[Tuple[int, int, ExtClass, Conflation]]:
        """Every realized conflation between carrier indecomposables."""
        for ci in self.indices:
            for ai in self.indices:
                C, A = self.catalog.indecs[ci], self.catalog.indecs[ai]
                cls_, _ = self.classes(C, A)
                for d in cls_:
                    yield ci, ai, d, ext_to_conflation(d)

    def morphism_sample(self, limit: Optional[int] = None) -> Iterator[RepMap]:
        """Hom basis maps between carrier indecomposables, deterministic order."""
        n = 0
        for i in self.indices:
            for j in self.indices:
                for f in hom_space(self.catalog.indecs[i], self.catalog.indecs[j]).basis:
                    yield f
                    n += 1
                    if limit is not None and n >= limit:
                        return


def ext_classes(C: Rep, A: Rep, caps: Caps = DEFAULT_CAPS) -> Tuple[List[ExtClass], bool]:
    sp = ext_space(C, A)
    if C.p ** sp.dim <= caps.sample_cap:
        return list(sp.classes()), True
    basis = [ExtClass(C, A, tuple(int(i == k) for i in range(sp.dim))) for k in range(sp.dim)]
    sums = [basis[i] + basis[j] for i in range(sp.dim) for j in range(i + 1, sp.dim)]
    out = [sp.zero()] + basis + sums
    # top up with seeded random classes; the seed fixes the sampling order
    rng = np.random.default_rng(caps.seed)
    seen = {d.coords for d in out}
    while len(out) < caps.sample_cap:
        coords = tuple(int(x) for x in rng.integers(0, C.p, size=sp.dim))
        if coords not in seen:
            seen.add(coords)
            out.append(ExtClass(C, A, coords))
    return out, False


# ---------------------------------------------------------------------------
# extension closure
# ---------------------------------------------------------------------------


def check_extension_closed(s: Subcat, caps: Caps = DEFAULT_CAPS) -> Verdict:
    cat = s.catalog
    complete = True
    checked = 0
    for ci in s.sorted_indices:
        for ai in s.sorted_indices:
            C, A = cat.indecs[ci], cat.indecs[ai]
            classes, full = ext_classes(C, A, caps)
            complete &= full
            for d in classes:
                conf = ext_to_conflation(d)
                checked += 1
                try:
                    ok = s.contains(conf.B)
                except CapExceeded as exc:
                    return Verdict.unknown(exc.cap, exc.detail)
                if not ok:
                    return Verdict.fails({
                        "C": cat.display_name(ci), "A": cat.display_name(ai),
                        "class": list(d.coords), "middle": describe(cat, conf.B)},
                        detail="realized middle term leaves the subcategory")
    if not complete:
        return Verdict.unknown("sample_cap", "Ext groups sampled (basis and pairwise sums)")
    return Verdict.holds(evidence={"conflations_checked": checked})


# ---------------------------------------------------------------------------
# morphisms
# ---------------------------------------------------------------------------


@dataclass
class MorphismClass:
    inflation: bool
    deflation: bool
    compatible: bool
    iso: bool

    def to_json(self):
        return dict(self.__dict__)


def is_inflation(f: RepMap, x: ExCat) -> bool:
    return f.is_injective() and x.contains(cokernel(f)[0])


def is_deflation(f: RepMap, x: ExCat) -> bool:
    return f.is_surjective() and x.contains(kernel(f)[0])


def is_compatible(f: RepMap, x: ExCat) -> bool:
    return not (is_inflation(f, x) and is_deflation(f, x)) or f.is_iso()


def classify_morphism(f: RepMap, x: ExCat) -> MorphismClass:
    inf = is_inflation(f, x)
    de = is_deflation(f, x)
    iso = f.is_iso()
    return MorphismClass(inf, de, (not (inf and de)) or iso, iso)


# ---------------------------------------------------------------------------
# one-sided exact sequences
# ---------------------------------------------------------------------------


def _fail(reason: str, **kw) -> Verdict:
    return Verdict.fails({"reason": reason, **kw})


def _is_conflation_in(c: Conflation, x: ExCat) -> bool:
    return c.is_exact() and all(x.contains(o) for o in (c.A, c.B, c.C))


def exact_sequence_check(seq: Sequence[RepMap], side: str, x: ExCat) -> Verdict:
    """Right/left exactness of ``A -f-> B -g-> C`` or ``A -f-> B -g-> C -h-> D``.

    The existential choices are resolved canonically: K = ker g for a right
    exact 3-term sequence, K = coker f otherwise.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    try:
        if len(seq) == 2:
            return _three_term(seq[0], seq[1], side, x)
        if len(seq) == 3:
            return _four_term(seq[0], seq[1], seq[2], side, x)
    except CapExceeded as exc:
        return Verdict.unknown(exc.cap, exc.detail)
    raise ValueError("expected 2 or 3 composable maps")


def _three_term(f: RepMap, g: RepMap, side: str, x: ExCat) -> Verdict:
    if f.target != g.source:
        raise ValueError("maps are not composable")
    for o in (f.source, f.target, g.target):
        if not x.contains(o):
            return _fail("term outside the carrier", object=x.describe(o))
    if not (g @ f).is_zero():
        return _fail("g f != 0")
    if side == "right":
        if not g.is_surjective():
            return _fail("g is not a deflation (not surjective)")
        K, h2 = kernel(g)
        if not x.contains(K):
            return _fail("ker g outside the carrier", K=x.describe(K))
        h1 = factor_through_mono(f, h2)
        if h1 is None:
            return _fail("f does not factor through ker g")
        if not is_deflation(h1, x):
            return _fail("h1: A -> ker g is not a deflation", K=x.describe(K))
        if not is_compatible(h1, x):
            return _fail("h1 is not compatible")
        return Verdict.holds(evidence={"K": x.describe(K)})
    if not f.is_injective():
        return _fail("f is not an inflation (not injective)")
    K, h1 = cokernel(f)
    if not x.contains(K):
        return _fail("coker f outside the carrier", K=x.describe(K))
    h2 = factor_through_epi(g, h1)
    if h2 is None:
        return _fail("g does not factor through coker f")
    if not is_inflation(h2, x):
        return _fail("h2: coker f -> C is not an inflation", K=x.describe(K))
    if not is_compatible(h2, x):
        return _fail("h2 is not compatible")
    return Verdict.holds(evidence={"K": x.describe(K)})


def _four_term(f: RepMap, g: RepMap, h: RepMap, side: str, x: ExCat) -> Verdict:
    if f.target != g.source or g.target != h.source:
        raise ValueError("maps are not composable")
    for o in (f.source, f.target, g.target, h.target):
        if not x.contains(o):
            return _fail("term outside the carrier", object=x.describe(o))
    if not f.is_injective():
        return _fail("f is not an inflation (not injective)")
    K, g1 = cokernel(f)
    if not x.contains(K):
        return _fail("coker f outside the carrier", K=x.describe(K))
    g2 = factor_through_epi(g, g1)
    if g2 is None:
        return _fail("g does not factor through coker f")
    second = Conflation(g2, h, check=False)
    if not _is_conflation_in(second, x):
        return _fail("K -> C -> D is not a conflation", K=x.describe(K))
    comp = g1 if side == "right" else g2
    if not is_compatible(comp, x):
        return _fail("factor is not compatible")
    return Verdict.holds(evidence={"K": x.describe(K)})


# ---------------------------------------------------------------------------
# (ET3) and (ET4)
# ---------------------------------------------------------------------------


class DiagramError(ValueError):
    pass


@dataclass
class ET3Fill:
    c: RepMap
    certificate: bool        # a_* δ = c^* δ'


def et3_fill(d1: Conflation, d2: Conflation, a: RepMap, b: RepMap) -> ET3Fill:
    """Complete (a, b) on the left square to a morphism of conflations (a, b, c)."""
    if not (b @ d1.incl == d2.incl @ a):
        raise DiagramError("left square does not commute")
    c = factor_through_epi(d2.proj @ b, d1.proj)
    if c is None:
        raise DiagramError("no induced map on cokernels")
    delta1 = conflation_to_ext(d1)
    delta2 = conflation_to_ext(d2)
    lhs = ext_transport(delta1, a=a)
    rhs = ext_transport(delta2, c=c)
    return ET3Fill(c, lhs == rhs)


@dataclass
class ET4Diagram:
    E: Rep
    h: RepMap          # A -> C
    h_prime: RepMap    # C -> E
    d: RepMap          # D -> E
    e: RepMap          # E -> F
    delta2: ExtClass   # class of A -> C -> E
    certificates: Dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.certificates.values())


def et4_compose(c1: Conflation, c2: Conflation) -> ET4Diagram:
    """(ET4) for ``A -f-> B -f'-> D`` and ``B -g-> C -g'-> F``."""
    if c1.B != c2.A:
        raise DiagramError("conflations do not share the middle object")
    f, f1 = c1.incl, c1.proj
    g, g1 = c2.incl, c2.proj
    h = g @ f
    E, h1 = cokernel(h)
    d = factor_through_epi(h1 @ g, f1)
    e = factor_through_epi(g1, h1)
    if d is None or e is None:
        raise DiagramError("induced maps do not exist")
    delta = conflation_to_ext(c1)
    delta_p = conflation_to_ext(c2)
    delta_pp = conflation_to_ext(Conflation(h, h1, check=False))
    third = Conflation(d, e, check=False)
    certs = {
        "exact": third.is_exact(),
        "i": third.is_exact() and conflation_to_ext(third) == ext_transport(delta_p, a=f1),
        "ii": ext_transport(delta_pp, c=d) == delta,
        "iii": ext_transport(delta_pp, a=f) == ext_transport(delta_p, c=e),
    }
    return ET4Diagram(E, h, h1, d, e, delta_pp, certs)


# ---------------------------------------------------------------------------
# functor exactness
# ---------------------------------------------------------------------------


def functor_exactness(F, mode: str, x_src: ExCat, x_tgt: ExCat,
                      caps: Caps = DEFAULT_CAPS) -> Verdict:
    """Sweep every realized conflation of the source carrier through ``F``."""
    if mode not in ("exact", "left", "right"):
        raise ValueError("mode must be exact, left or right")
    for i in x_src.indices:
        img = F.obj(x_src.catalog.indecs[i])
        if not x_tgt.contains(img):
            return Verdict.fails({"reason": "object leaves the target carrier",
                                  "object": x_src.catalog.display_name(i),
                                  "image": x_tgt.describe(img)})
    sides = ("left", "right") if mode == "exact" else (mode,)
    complete = True
    swept = 0
    for ci in x_src.indices:
        for ai in x_src.indices:
            C, A = x_src.catalog.indecs[ci], x_src.catalog.indecs[ai]
            classes, full = ext_classes(C, A, caps)
            complete &= full
            for d in classes:
                conf = ext_to_conflation(d)
                fa, fg = F.mor(conf.incl), F.mor(conf.proj)
                swept += 1
                for side in sides:
                    v = exact_sequence_check([fa, fg], side, x_tgt)
                    if v.status is not Status.HOLDS:
                        if v.status is Status.UNKNOWN:
                            return v
                        return Verdict.fails({
                            "reason": f"image of a conflation is not {side} exact",
                            "conflation": {"C": x_src.catalog.display_name(ci),
                                           "A": x_src.catalog.display_name(ai),
                                           "class": list(d.coords),
                                           "B": x_src.describe(conf.B)},
                            "image": {"FA": x_tgt.describe(fa.source),
                                      "FB": x_tgt.describe(fa.target),
                                      "FC": x_tgt.describe(fg.target)},
                            "check": v.witness})
    # compatible morphisms go to compatible morphisms
    for f in x_src.morphism_sample(caps.naturality_cap * 16):
        if is_compatible(f, x_src) and not is_compatible(F.mor(f), x_tgt):
            return Verdict.fails({"reason": "compatible morphism not preserved",
                                  "map": describe_map(x_src.catalog, f)})
    if not complete:
        return Verdict.unknown("sample_cap", "Ext groups sampled")
    return Verdict.holds(evidence={"conflations": swept})


# ---------------------------------------------------------------------------
# WIC spot-check
# ---------------------------------------------------------------------------


def wic_spot_check(x: ExCat, limit: int = 512) -> Verdict:
    """gf inflation => f inflation; gf deflation => g deflation (sampled pairs)."""
    cat = x.catalog
    n = 0
    for i, j, k in itertools.product(x.indices, repeat=3):
        X, Y, Z = cat.indecs[i], cat.indecs[j], cat.indecs[k]
        for f in hom_space(X, Y).basis:
            for g in hom_space(Y, Z).basis:
                gf = g @ f
                if is_inflation(gf, x) and not is_inflation(f, x):
                    return Verdict.fails({"reason": "gf inflation but f not",
                                          "f": describe_map(cat, f), "g": describe_map(cat, g)})
                if is_deflation(gf, x) and not is_deflation(g, x):
                    return Verdict.fails({"reason": "gf deflation but g not",
                                          "f": describe_map(cat, f), "g": describe_map(cat, g)})
                n += 1
                if n >= limit:
                    return Verdict.holds(evidence={"pairs": n, "truncated": True})
    return Verdict.holds(evidence={"pairs": n, "truncated": False})


def abelian_compatibility(x: ExCat, limit: int = 4096) -> Verdict:
    """No non-iso is simultaneously an inflation and a deflation."""
    for f in x.morphism_sample(limit):
        mc = classify_morphism(f, x)
        if mc.inflation and mc.deflation and not mc.iso:
            return Verdict.fails({"map": describe_map(x.catalog, f)})
    return Verdict.holds()
