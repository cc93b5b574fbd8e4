"""Turn a parsed scenario into catalogs, carriers and a recollement."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .. import exactlin as el
from ..algebra import Algebra, AlgebraError, Arrow, Quiver, Relation, build_algebra
from ..exactlin import FieldSpec
from ..exstruct import ExCat, Subcat
from ..morphcat import ENDS, MorphismCategory, recollement_functors
from ..recollement import RecollementScenario, injective_indices, projective_indices
from ..repcat.catalog import Catalog, CatalogMiss, NameError_, catalog_from_candidates, \
    enumerate_indecomposables
from ..repcat.homext import hom_space, injective_of_vertex, projective_of_vertex
from ..repcat.rep import Rep, RepMap
from ..verdict import Caps
from .cache import CatalogCache, cache_key
from .scenario import Scenario, ScenarioError

DEFAULT_BOUND = 2
SIDES = {"left": "A", "middle": "B", "right": "C", "A": "A", "B": "B", "C": "C"}


def build_base_algebra(scn: Scenario) -> Algebra:
    a = scn.algebra
    try:
        q = Quiver(a.vertices, tuple(Arrow(*x) for x in a.arrows))
    except AlgebraError as exc:
        raise ScenarioError(str(exc), *scn.located("algebra.arrows")) from None
    try:
        rels = [Relation(r) for r in a.relations]
        return build_algebra(q, rels, FieldSpec(a.p), a.name)
    except AlgebraError as exc:
        raise ScenarioError(str(exc), *scn.located("algebra.relations")) from None


def _bounds(scn: Scenario, override: Optional[Tuple[int, ...]] = None) -> Tuple[int, ...]:
    n = len(scn.algebra.vertices)
    b = override or scn.category.bounds or (DEFAULT_BOUND,)
    if len(b) == 1:
        b = b * n
    if len(b) != n:
        raise ScenarioError(f"expected {n} bounds, got {len(b)}")
    return tuple(b)


# ---------------------------------------------------------------------------
# naming
# ---------------------------------------------------------------------------


def _register(cat: Catalog, name: str, i: int) -> None:
    if name in cat.aliases:
        if cat.aliases[name] == i:
            return
        k = 2
        while f"{name}#{k}" in cat.aliases:
            k += 1
        name = f"{name}#{k}"
    cat.add_alias(name, i)


def alias_base_catalog(cat: Catalog) -> None:
    """``S<v>`` (simples), then ``P<v>`` and ``I<v>``, for objects in the catalog."""
    a = cat.algebra
    for kind in ("S", "P", "I"):
        for v in a.vertices:
            if kind == "S":
                dims = [int(w == v) for w in a.vertices]
                m = Rep(a, dims, [el.zeros(dims[a.quiver.vertex_index[x.target]],
                                           dims[a.quiver.vertex_index[x.source]])
                                  for x in a.arrows], check=False)
            elif kind == "P":
                m = projective_of_vertex(a, v)
            else:
                m = injective_of_vertex(a, v)
            try:
                i = cat.identify(m)
            except CatalogMiss:
                continue
            if f"{kind}{v}" not in cat.aliases:
                cat.add_alias(f"{kind}{v}", i)


def _is_iso(f: RepMap) -> bool:
    return all(c.shape[0] == c.shape[1] and el.rank(c, f.p) == c.shape[0] for c in f.comps)


def _summand_name(cat: Catalog, m: Rep) -> Optional[str]:
    if m.is_zero():
        return "0"
    try:
        dec = cat.decompose(m)
    except CatalogMiss:
        return None
    parts = []
    for i, k in sorted(dec.items()):
        parts.extend([cat.display_name(i)] * k)
    return "+".join(parts)


def alias_morphism_catalog(cat: Catalog, mc: MorphismCategory, base: Catalog,
                           map_aliases: Dict[str, Tuple[int, int]]) -> None:
    """Names ``X|Y`` for triples ``(X, Y, 0)``, ``X|Y_1`` for isomorphisms
    ``Y -> X`` and ``X|Y_<name>`` when a declared map alias ``name = Y -> X``
    matches (otherwise ``X|Y_f``)."""
    for i, m in enumerate(cat.indecs):
        X, Y, f = mc.parts(m)
        xn, yn = _summand_name(base, X), _summand_name(base, Y)
        if xn is None or yn is None:
            continue
        if f.is_zero():
            name = f"{xn}|{yn}"
        elif _is_iso(f):
            name = f"{xn}|{yn}_1"
        else:
            tag = "f"
            for alias, (s, t) in map_aliases.items():
                if xn == base.display_name(t) and yn == base.display_name(s):
                    tag = alias
                    break
            name = f"{xn}|{yn}_{tag}"
        _register(cat, name, i)


# ---------------------------------------------------------------------------
# context
# ---------------------------------------------------------------------------


@dataclass
class Context:
    scenario: Scenario
    caps: Caps
    base_algebra: Algebra
    base: Catalog                           # catalog of mod A
    ambient: Catalog                        # catalog of the constructed category's ambient
    cats: Dict[str, ExCat]                  # "A", "B", "C" (A and C only with a recollement)
    mc: Optional[MorphismCategory] = None
    recollement: Optional[RecollementScenario] = None
    map_aliases: Dict[str, Tuple[int, int]] = field(default_factory=dict)

    def category(self, side: str) -> ExCat:
        key = SIDES.get(side)
        if key is None or key not in self.cats:
            have = ", ".join(sorted(self.cats))
            raise ScenarioError(f"no category {side!r} in this scenario (have {have})")
        return self.cats[key]

    def need_recollement(self) -> RecollementScenario:
        if self.recollement is None:
            raise ScenarioError("this scenario declares no recollement")
        return self.recollement

    def subcat(self, spec: str, side: str = "B", name: str = "") -> Subcat:
        return resolve_list(spec, self.category(side), name)


def resolve_list(spec: str, x: ExCat, name: str = "") -> Subcat:
    """Comma-separated names; ``*`` is the whole carrier, ``@P``/``@I`` its
    projectives/injectives; an empty list is the zero subcategory."""
    cat = x.catalog
    idx: List[int] = []
    for item in (s.strip() for s in spec.split(",")):
        if not item:
            continue
        if item == "*":
            idx.extend(x.indices)
        elif item == "@P":
            idx.extend(projective_indices(x))
        elif item == "@I":
            idx.extend(injective_indices(x))
        else:
            try:
                i = cat.index_of(item)
            except NameError_:
                raise ScenarioError(f"unknown object name {item!r}") from None
            if i not in x.carrier.indices:
                raise ScenarioError(f"{item!r} is not an object of {x.name}")
            idx.append(i)
    return Subcat(cat, sorted(set(idx)), name)


def _catalog(cache: CatalogCache, algebra: Algebra, bounds, strategy: str, caps: Caps,
             compute) -> Catalog:
    key = cache_key(algebra, bounds, strategy, str(caps.enum_cap))
    return cache.get(algebra, key, caps, compute)


def build_context(scn: Scenario, cache: Optional[CatalogCache] = None,
                  bounds: Optional[Tuple[int, ...]] = None, caps: Optional[Caps] = None) -> Context:
    cache = cache or CatalogCache(enabled=False)
    caps = caps or scn.caps
    A = build_base_algebra(scn)
    b = _bounds(scn, bounds)
    base = _catalog(cache, A, b, "modules", caps,
                    lambda: enumerate_indecomposables(A, b, caps))
    alias_base_catalog(base)

    map_aliases: Dict[str, Tuple[int, int]] = {}
    object_aliases = []
    for key, value in scn.aliases:
        if "->" in value:
            s, _, t = value.partition("->")
            try:
                si, ti = base.index_of(s), base.index_of(t)
            except NameError_ as exc:
                ln, col = scn.located(f"aliases.{key}")
                raise ScenarioError(f"alias {key!r}: {exc.args[0]}", ln, col) from None
            if hom_space(base.indecs[si], base.indecs[ti]).dim == 0:
                ln, col = scn.located(f"aliases.{key}")
                raise ScenarioError(f"alias {key!r}: there is no nonzero map {value}", ln, col)
            map_aliases[key] = (si, ti)
        else:
            object_aliases.append((key, value))

    mc = None
    if scn.category.ambient == "morphism_category":
        mc = MorphismCategory(A)
        tb = b + b
        if scn.category.strategy == "scan":
            ambient = _catalog(cache, mc.alg, tb, "scan", caps,
                               lambda: enumerate_indecomposables(mc.alg, tb, caps))
        else:
            mult = scn.category.multiplicity
            ambient = _catalog(
                cache, mc.alg, tb, f"triples{mult}", caps,
                lambda: catalog_from_candidates(mc.alg, mc.triples(base.indecs, mult,
                                                                   caps.enum_cap),
                                                caps, "triples", tb))
        alias_morphism_catalog(ambient, mc, base, map_aliases)
    else:
        ambient = base

    for key, value in object_aliases:
        for cat in ((ambient, base) if ambient is not base else (base,)):
            try:
                _register(cat, key, cat.index_of(value))
                break
            except NameError_:
                continue
        else:
            ln, col = scn.located(f"aliases.{key}")
            raise ScenarioError(f"alias {key!r}: unknown object name {value!r}", ln, col)

    full = ExCat(Subcat.full(ambient, "ambient"), "ambient", caps)
    if scn.category.construction == "subcategory":
        try:
            middle_sub = resolve_list(",".join(scn.category.objects), full, "X")
        except ScenarioError as exc:
            ln, col = scn.located("category.objects")
            raise ScenarioError(exc.msg, ln, col) from None
        middle = ExCat(middle_sub, "X", caps)
    else:
        middle = ExCat(Subcat.full(ambient, "mod B" if mc else "mod A"),
                       "mod B" if mc else "mod A", caps)

    cats = {"B": middle}
    rec = None
    if scn.recollement is not None:
        full_base = ExCat(Subcat.full(base, "mod A"), "mod A", caps)
        sides = {}
        for side, spec, key in (("A", scn.recollement.left, "left"),
                                ("C", scn.recollement.right, "right")):
            try:
                sub = resolve_list(",".join(spec), full_base, side)
            except ScenarioError as exc:
                ln, col = scn.located(f"recollement.{key}")
                raise ScenarioError(exc.msg, ln, col) from None
            nm = "mod A" if len(sub) == len(base) else ("X1" if side == "A" else "X2")
            sides[side] = ExCat(Subcat(base, sub.indices, nm), nm, caps)
        cats.update(sides)
        functors = recollement_functors(mc)
        for tag, other in scn.recollement.overrides:
            if ENDS[tag] != ENDS[other]:
                ln, col = scn.located(f"recollement.{tag}")
                raise ScenarioError(f"{other} cannot stand in for {tag}: different source or "
                                    f"target category", ln, col)
            functors[tag] = functors[other]
        rec = RecollementScenario(sides["A"], middle, sides["C"], functors, caps, scn.name)
    return Context(scn, caps, A, base, ambient, cats, mc, rec, map_aliases)
