"""The morphism category Mor(A), realized as modules over T2(A).

A triple ``(X, Y, f)`` with ``f: Y -> X`` is the T2(A)-representation whose
top copy of the quiver carries X, bottom (primed) copy carries Y, and whose
connecting arrows ``c_v: v' -> v`` carry the components of f.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin as el
from .algebra import Algebra, Arrow, Quiver, Relation, build_algebra
from .repcat.homext import (Conflation, ExtClass, conflation_to_ext, hom_space)
from .repcat.rep import Rep, RepError, RepMap, kernel, cokernel, quotient

PRIME = "'"


def _bottom(v: str) -> str:
    return v + PRIME


def _conn(v: str) -> str:
    return "c" + v


_T2_CACHE: Dict[int, Algebra] = {}


def triangular_matrix_algebra(a: Algebra) -> Algebra:
    """T2(A): two copies of the quiver joined by ``c_v: v' -> v``, commutativity imposed."""
    hit = _T2_CACHE.get(id(a))
    if hit is not None and hit._base is a:
        return hit
    q = a.quiver
    verts = tuple(q.vertices) + tuple(_bottom(v) for v in q.vertices)
    arrows = list(q.arrows)
    arrows += [Arrow(x.label + PRIME, _bottom(x.source), _bottom(x.target)) for x in q.arrows]
    arrows += [Arrow(_conn(v), _bottom(v), v) for v in q.vertices]
    rels = list(a.relations)
    for r in a.relations:
        rels.append(Relation(tuple((c, tuple(x + PRIME for x in path)) for c, path in r.terms)))
    for x in q.arrows:
        rels.append(Relation(((1, (_conn(x.source), x.label)),
                              (-1, (x.label + PRIME, _conn(x.target))))))
    b = build_algebra(Quiver(verts, tuple(arrows)), rels, a.field, name=f"T2({a.name or 'A'})")
    object.__setattr__(b, "_base", a)
    _T2_CACHE[id(a)] = b
    return b


# ---------------------------------------------------------------------------
# triples
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TripleObj:
    X: Rep
    Y: Rep
    f: RepMap

    def __post_init__(self):
        if self.f.source != self.Y or self.f.target != self.X:
            raise RepError("f must be a map Y -> X")


@dataclass(frozen=True)
class TripleMap:
    source: TripleObj
    target: TripleObj
    u: RepMap   # top component
    v: RepMap   # bottom component

    def __post_init__(self):
        if not (self.u @ self.source.f == self.target.f @ self.v):
            raise RepError("triple map square does not commute")


class MorphismCategory:
    """Conversions between triples over A and representations of T2(A)."""

    def __init__(self, base: Algebra):
        self.base = base
        self.alg = triangular_matrix_algebra(base)
        q = base.quiver
        n = len(q.vertices)
        na = len(q.arrows)
        self.n = n
        self.na = na
        # arrow layout in self.alg: top copies, bottom copies, connecting
        self.top_arrows = list(range(na))
        self.bot_arrows = list(range(na, 2 * na))
        self.conn_arrows = list(range(2 * na, 2 * na + n))

    # objects ------------------------------------------------------------
    def to_rep(self, t: TripleObj) -> Rep:
        dims = list(t.X.dims) + list(t.Y.dims)
        mats = list(t.X.mats) + list(t.Y.mats) + list(t.f.comps)
        return Rep(self.alg, dims, mats, check=False)

    def to_triple(self, m: Rep) -> TripleObj:
        if m.algebra is not self.alg:
            raise RepError("not a representation of the triangular matrix algebra")
        for r in self.alg.relations:
            if m.eval_relation(r).any():
                raise RepError(f"relation {r} does not vanish")
        n, na = self.n, self.na
        X = Rep(self.base, m.dims[:n], m.mats[:na], check=False)
        Y = Rep(self.base, m.dims[n:], m.mats[na:2 * na], check=False)
        f = RepMap(Y, X, m.mats[2 * na:], check=False)
        return TripleObj(X, Y, f)

    def parts(self, m: Rep) -> Tuple[Rep, Rep, RepMap]:
        t = self.to_triple(m)
        return t.X, t.Y, t.f

    def make(self, X: Rep, Y: Rep, f: RepMap | None = None) -> Rep:
        if f is None:
            f = RepMap.zero(Y, X)
        return self.to_rep(TripleObj(X, Y, f))

    # maps ---------------------------------------------------------------
    def map_to_rep(self, src: Rep, tgt: Rep, u: RepMap, v: RepMap) -> RepMap:
        return RepMap(src, tgt, list(u.comps) + list(v.comps), check=False)

    def map_parts(self, g: RepMap) -> Tuple[RepMap, RepMap]:
        X, Y, _ = self.parts(g.source)
        X2, Y2, _ = self.parts(g.target)
        n = self.n
        return (RepMap(X, X2, g.comps[:n], check=False), RepMap(Y, Y2, g.comps[n:], check=False))

    def to_triple_map(self, g: RepMap) -> TripleMap:
        u, v = self.map_parts(g)
        return TripleMap(self.to_triple(g.source), self.to_triple(g.target), u, v)

    def from_triple_map(self, t: TripleMap) -> RepMap:
        return self.map_to_rep(self.to_rep(t.source), self.to_rep(t.target), t.u, t.v)

    def triple_convert(self, obj):
        """TripleObj <-> Rep (and TripleMap <-> RepMap)."""
        if isinstance(obj, TripleObj):
            return self.to_rep(obj)
        if isinstance(obj, TripleMap):
            return self.from_triple_map(obj)
        if isinstance(obj, RepMap):
            return self.to_triple_map(obj)
        return self.to_triple(obj)

    # enumeration of triples (cross-check strategy) ---------------------
    def triples(self, base_indecs: Sequence[Rep], mult_bound: int = 1, enum_cap: int = 1 << 16):
        """All (X, Y, f) with X, Y sums of base indecomposables of multiplicity
        ``<= mult_bound`` and every f in Hom(Y, X) (exhaustive while
        ``p**dim Hom <= enum_cap``)."""
        from .repcat.rep import direct_sum
        sums = []
        for mult in itertools.product(range(mult_bound + 1), repeat=len(base_indecs)):
            parts = [x for x, k in zip(base_indecs, mult) for _ in range(k)]
            sums.append(direct_sum(*parts) if parts else Rep.zero(self.base))
        for X in sums:
            for Y in sums:
                hs = hom_space(Y, X)
                if self.base.p ** hs.dim > enum_cap:
                    raise ValueError("Hom space too large to enumerate")
                for f in hs.elements():
                    yield self.make(X, Y, f)


# ---------------------------------------------------------------------------
# functors
# ---------------------------------------------------------------------------

TAGS = ("i_star_upper", "i_star_lower", "i_shriek", "j_lower_shriek", "j_star", "j_lower_star")
SYMBOLS = {"i_star_upper": "i^*", "i_star_lower": "i_*", "i_shriek": "i^!",
           "j_lower_shriek": "j_!", "j_star": "j^*", "j_lower_star": "j_*"}
TAG_ALIASES = {SYMBOLS[t]: t for t in TAGS}
TAG_ALIASES.update({"i*": "i_star_upper", "i_*": "i_star_lower", "i!": "i_shriek",
                    "j!": "j_lower_shriek", "j*": "j_star", "j_*": "j_lower_star"})
# (source category, target category) with A = left, B = middle, C = right
ENDS = {"i_star_upper": ("B", "A"), "i_star_lower": ("A", "B"), "i_shriek": ("B", "A"),
        "j_lower_shriek": ("C", "B"), "j_star": ("B", "C"), "j_lower_star": ("C", "B")}


def canonical_tag(tag: str) -> str:
    tag = tag.strip()
    if tag in TAGS:
        return tag
    if tag in TAG_ALIASES:
        return TAG_ALIASES[tag]
    raise KeyError(f"unknown functor tag {tag!r}")


class FunctorHandle:
    """A functor between the categories of a recollement, or a composite.

    ``obj`` and ``mor`` implement the action on objects and morphisms.
    Composite handles store their factor list (applied right to left as
    written, i.e. ``parts[0]`` is applied last) and evaluate lazily.
    """

    def __init__(self, tag: str, source: str, target: str,
                 obj: Callable[[Rep], Rep], mor: Callable[[RepMap], RepMap],
                 parts: Tuple["FunctorHandle", ...] = ()):
        self.tag = tag
        self.source = source
        self.target = target
        self._obj = obj
        self._mor = mor
        self.parts = parts or (self,)
        self._cache: Dict = {}

    def __call__(self, x):
        if isinstance(x, RepMap):
            return self.mor(x)
        return self.obj(x)

    def obj(self, m: Rep) -> Rep:
        hit = self._cache.get(m.key)
        if hit is None:
            hit = self._obj(m)
            self._cache[m.key] = hit
        return hit

    def mor(self, g: RepMap) -> RepMap:
        return self._mor(g)

    def then(self, other: "FunctorHandle") -> "FunctorHandle":
        """``other ∘ self``."""
        if self.target != other.source:
            raise ValueError(f"cannot compose {other.tag} after {self.tag}")
        return FunctorHandle(f"{other.tag}.{self.tag}", self.source, other.target,
                             lambda m: other.obj(self.obj(m)),
                             lambda g: other.mor(self.mor(g)),
                             other.parts + self.parts)

    @property
    def symbol(self) -> str:
        return "".join(SYMBOLS.get(p.tag, p.tag) for p in self.parts)

    def apply_sequence(self, f: RepMap, g: RepMap) -> Tuple[RepMap, RepMap]:
        return self.mor(f), self.mor(g)

    def transport(self, delta: ExtClass, realize) -> Tuple[Optional[ExtClass], str]:
        """Transport an Ext class: realize it, apply the functor, read a class back.

        Returns ``(class, mode)`` with mode ``"exact"`` when the image is a
        conflation, ``"right"`` when ``F(g)`` is a deflation and the class is
        read from ``ker F(g) -> F(B) -> F(C)``, ``"left"`` dually, and
        ``(None, "none")`` if neither applies.
        """
        conf = realize(delta)
        fa, fg = self.mor(conf.incl), self.mor(conf.proj)
        c2 = Conflation(fa, fg, check=False)
        if c2.is_exact():
            return conflation_to_ext(c2), "exact"
        if fg.is_surjective():
            k, incl = kernel(fg)
            return conflation_to_ext(Conflation(incl, fg, check=False)), "right"
        if fa.is_injective():
            c, proj = cokernel(fa)
            return conflation_to_ext(Conflation(fa, proj, check=False)), "left"
        return None, "none"

    def __repr__(self):
        return f"FunctorHandle({self.symbol}: {self.source} -> {self.target})"


def recollement_functors(mc: MorphismCategory) -> Dict[str, FunctorHandle]:
    """The six functors of the standard recollement of mod T2(A)."""
    base = mc.base
    p = base.p
    zero_a = Rep.zero(base)

    def i_upper_obj(m):
        X, Y, f = mc.parts(m)
        return quotient(X, list(f.comps))[0]

    def i_upper_mor(g):
        u, _ = mc.map_parts(g)
        _, _, f1 = mc.parts(g.source)
        _, _, f2 = mc.parts(g.target)
        q1 = [el.cokernel(c, p) for c in f1.comps]
        q2 = [el.cokernel(c, p) for c in f2.comps]
        comps = [el.mul(el.mul(b.q, uc, p), a.section, p) for a, b, uc in zip(q1, q2, u.comps)]
        return RepMap(i_upper_obj(g.source), i_upper_obj(g.target), comps, check=False)

    def i_lower_obj(x):
        return mc.make(x, zero_a)

    def i_lower_mor(u):
        return mc.map_to_rep(i_lower_obj(u.source), i_lower_obj(u.target), u,
                             RepMap.identity(zero_a))

    def i_shriek_obj(m):
        return mc.parts(m)[0]

    def i_shriek_mor(g):
        return mc.map_parts(g)[0]

    def j_shriek_obj(y):
        return mc.make(y, y, RepMap.identity(y))

    def j_shriek_mor(v):
        return mc.map_to_rep(j_shriek_obj(v.source), j_shriek_obj(v.target), v, v)

    def j_star_obj(m):
        return mc.parts(m)[1]

    def j_star_mor(g):
        return mc.map_parts(g)[1]

    def j_lower_obj(y):
        return mc.make(zero_a, y)

    def j_lower_mor(v):
        return mc.map_to_rep(j_lower_obj(v.source), j_lower_obj(v.target),
                             RepMap.identity(zero_a), v)

    impl = {
        "i_star_upper": (i_upper_obj, i_upper_mor),
        "i_star_lower": (i_lower_obj, i_lower_mor),
        "i_shriek": (i_shriek_obj, i_shriek_mor),
        "j_lower_shriek": (j_shriek_obj, j_shriek_mor),
        "j_star": (j_star_obj, j_star_mor),
        "j_lower_star": (j_lower_obj, j_lower_mor),
    }
    return {t: FunctorHandle(t, *ENDS[t], *impl[t]) for t in TAGS}


# ---------------------------------------------------------------------------
# adjunctions
# ---------------------------------------------------------------------------

ADJUNCTIONS = (("i_star_upper", "i_star_lower"), ("i_star_lower", "i_shriek"),
               ("j_lower_shriek", "j_star"), ("j_star", "j_lower_star"))


class AdjunctionError(ValueError):
    def __init__(self, msg: str, witness: dict):
        super().__init__(msg)
        self.witness = witness


class Adjunction:
    """``F ⊣ G`` with unit and counit solved from the universal property.

    For triangular-matrix recollements one of FG, GF is the identity on the
    nose, so one of unit/counit is an identity.  The other is the unique map
    ``u`` with ``F(u) = id`` (resp. ``G(u) = id``), found by linear algebra
    on a Hom basis; non-existence or non-uniqueness raises AdjunctionError.
    """

    def __init__(self, F: FunctorHandle, G: FunctorHandle):
        if F.source != G.target or F.target != G.source:
            raise ValueError("functors are not composable both ways")
        self.F, self.G = F, G
        self._units: Dict = {}
        self._counits: Dict = {}

    def _solve(self, src: Rep, tgt: Rep, functor: FunctorHandle, want: RepMap) -> RepMap:
        hs = hom_space(src, tgt)
        p = src.p
        cols = [functor.mor(b).flat() for b in hs.basis]
        m = np.stack(cols, axis=1) if cols else el.zeros(want.flat().shape[0], 0)
        res = el.solve_all(m, want.flat(), p)
        if res is None:
            raise AdjunctionError("no map with the universal property",
                                  {"source_dims": list(src.dims), "target_dims": list(tgt.dims)})
        x, k = res
        if k.shape[1]:
            raise AdjunctionError("universal map is not unique",
                                  {"source_dims": list(src.dims), "target_dims": list(tgt.dims),
                                   "kernel_dim": int(k.shape[1])})
        return hs.element(x)

    def unit(self, m: Rep) -> RepMap:
        """η_m: m -> G F m."""
        hit = self._units.get(m.key)
        if hit is not None:
            return hit
        fm = self.F.obj(m)
        gfm = self.G.obj(fm)
        if gfm == m:
            out = RepMap.identity(m)
        else:
            # ε_{Fm} must be the identity (FG = id on Fm); F(η) = id
            if self.F.obj(self.G.obj(fm)) != fm:
                raise AdjunctionError("neither composite is the identity here",
                                      {"dims": list(m.dims)})
            out = self._solve(m, gfm, self.F, RepMap.identity(fm))
        self._units[m.key] = out
        return out

    def counit(self, n: Rep) -> RepMap:
        """ε_n: F G n -> n."""
        hit = self._counits.get(n.key)
        if hit is not None:
            return hit
        gn = self.G.obj(n)
        fgn = self.F.obj(gn)
        if fgn == n:
            out = RepMap.identity(n)
        else:
            if self.G.obj(self.F.obj(gn)) != gn:
                raise AdjunctionError("neither composite is the identity here",
                                      {"dims": list(n.dims)})
            out = self._solve(fgn, n, self.G, RepMap.identity(gn))
        self._counits[n.key] = out
        return out

    def triangle_identities(self, x: Rep, y: Rep) -> Tuple[bool, bool]:
        """``ε_{Fx} ∘ F(η_x) = id_{Fx}`` and ``G(ε_y) ∘ η_{Gy} = id_{Gy}``."""
        fx = self.F.obj(x)
        t1 = self.counit(fx) @ self.F.mor(self.unit(x)) == RepMap.identity(fx)
        gy = self.G.obj(y)
        t2 = self.G.mor(self.counit(y)) @ self.unit(gy) == RepMap.identity(gy)
        return t1, t2


def unit_counit(functors: Dict[str, FunctorHandle], left: str, right: str, obj: Rep,
                which: str = "unit") -> RepMap:
    left, right = canonical_tag(left), canonical_tag(right)
    if (left, right) not in ADJUNCTIONS:
        raise ValueError(f"({left}, {right}) is not one of the recollement adjunctions")
    adj = Adjunction(functors[left], functors[right])
    return adj.unit(obj) if which == "unit" else adj.counit(obj)
