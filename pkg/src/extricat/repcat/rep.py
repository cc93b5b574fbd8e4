"""Representations of a bound quiver and the maps between them."""

from __future__ import annotations

from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from .. import exactlin as el
from ..algebra import Algebra, AlgebraError, Path


class RepError(ValueError):
    pass


def _freeze(m: np.ndarray) -> np.ndarray:
    m = np.ascontiguousarray(m, dtype=el.DTYPE)
    m.setflags(write=False)
    return m


class Rep:
    """A representation: a space per vertex, a matrix per arrow.

    ``mats[i]`` is the matrix of arrow ``i`` with shape
    ``(dim target, dim source)``.  Instances are immutable, hashable and
    compare equal when all data agree exactly (not up to isomorphism).
    """

    __slots__ = ("algebra", "dims", "mats", "__dict__")

    def __init__(self, algebra: Algebra, dims: Sequence[int], mats: Sequence[np.ndarray],
                 check: bool = True):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        p = algebra.p
        self.mats = tuple(_freeze(np.asarray(m, dtype=el.DTYPE).reshape(
            self.dims[algebra.quiver.vertex_index[a.target]],
            self.dims[algebra.quiver.vertex_index[a.source]]) % p)
            for a, m in zip(algebra.arrows, mats))
        if len(self.dims) != len(algebra.vertices) or len(self.mats) != len(algebra.arrows):
            raise RepError("dimension vector or arrow list has the wrong length")
        if check:
            for r in algebra.relations:
                if self.eval_relation(r).any():
                    raise RepError(f"relation {r} does not vanish")

    # construction helpers -------------------------------------------------
    @classmethod
    def from_dict(cls, algebra: Algebra, dims: Mapping[str, int],
                  mats: Mapping[str, Sequence] | None = None) -> "Rep":
        mats = mats or {}
        dvec = [int(dims.get(v, 0)) for v in algebra.vertices]
        vi = algebra.quiver.vertex_index
        ms = []
        for a in algebra.arrows:
            shape = (dvec[vi[a.target]], dvec[vi[a.source]])
            if a.label in mats:
                ms.append(np.array(mats[a.label], dtype=el.DTYPE).reshape(shape))
            else:
                ms.append(el.zeros(*shape))
        return cls(algebra, dvec, ms)

    @classmethod
    def zero(cls, algebra: Algebra) -> "Rep":
        return cls.from_dict(algebra, {})

    @classmethod
    def simple(cls, algebra: Algebra, v: str) -> "Rep":
        if v not in algebra.quiver.vertex_index:
            raise AlgebraError(f"unknown vertex {v!r}")
        return cls.from_dict(algebra, {v: 1})

    # accessors ------------------------------------------------------------
    @property
    def p(self) -> int:
        return self.algebra.p

    def dim_at(self, v: str) -> int:
        return self.dims[self.algebra.quiver.vertex_index[v]]

    def mat_of(self, arrow: str) -> np.ndarray:
        return self.mats[self.algebra.quiver.arrow_index[arrow]]

    @cached_property
    def total_dim(self) -> int:
        return sum(self.dims)

    @cached_property
    def offsets(self) -> Tuple[int, ...]:
        return tuple(np.concatenate([[0], np.cumsum(self.dims)]).astype(int))

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def eval_path(self, path: Path, start: str) -> np.ndarray:
        q = self.algebra.quiver
        s, _ = q.endpoints(path, start)
        cur = el.identity(self.dim_at(s))
        for label in path:
            cur = el.mul(self.mat_of(label), cur, self.p)
        return cur

    def eval_relation(self, r) -> np.ndarray:
        s, t = r.endpoints(self.algebra.quiver)
        acc = el.zeros(self.dim_at(t), self.dim_at(s))
        for c, pth in r.terms:
            acc = (acc + c * self.eval_path(pth, s)) % self.p
        return acc

    # identity / hashing ---------------------------------------------------
    @cached_property
    def key(self):
        return (id(self.algebra), self.dims, tuple(m.tobytes() for m in self.mats))

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        return isinstance(other, Rep) and self.key == other.key

    def __repr__(self):
        return f"Rep(dims={self.dims})"

    def to_json(self) -> dict:
        return {"dims": list(self.dims),
                "mats": {a.label: m.tolist() for a, m in zip(self.algebra.arrows, self.mats)}}

    @classmethod
    def from_json(cls, algebra: Algebra, data: dict) -> "Rep":
        dims = dict(zip(algebra.vertices, data["dims"]))
        return cls.from_dict(algebra, dims, data["mats"])


class RepMap:
    """A morphism of representations, one matrix per vertex."""

    __slots__ = ("source", "target", "comps", "__dict__")

    def __init__(self, source: Rep, target: Rep, comps: Sequence[np.ndarray], check: bool = True):
        if source.algebra is not target.algebra:
            raise RepError("maps between representations of different algebras")
        self.source = source
        self.target = target
        p = source.p
        self.comps = tuple(_freeze(np.asarray(c, dtype=el.DTYPE).reshape(t, s) % p)
                           for c, s, t in zip(comps, source.dims, target.dims))
        if len(self.comps) != len(source.dims):
            raise RepError("wrong number of components")
        if check and not self.commutes():
            raise RepError("components do not commute with the arrows")

    @classmethod
    def _trusted(cls, source: Rep, target: Rep, comps: Sequence[np.ndarray]) -> "RepMap":
        """Internal constructor for components that are already reduced,
        correctly shaped and known to commute."""
        m = object.__new__(cls)
        m.source = source
        m.target = target
        m.comps = tuple(_freeze(c) for c in comps)
        return m

    @property
    def algebra(self) -> Algebra:
        return self.source.algebra

    @property
    def p(self) -> int:
        return self.source.p

    def commutes(self) -> bool:
        vi = self.algebra.quiver.vertex_index
        p = self.p
        for i, a in enumerate(self.algebra.arrows):
            x, y = vi[a.source], vi[a.target]
            lhs = el.mul(self.comps[y], self.source.mats[i], p)
            rhs = el.mul(self.target.mats[i], self.comps[x], p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    @classmethod
    def identity(cls, m: Rep) -> "RepMap":
        return cls(m, m, [el.identity(d) for d in m.dims], check=False)

    @classmethod
    def zero(cls, source: Rep, target: Rep) -> "RepMap":
        return cls(source, target, [el.zeros(t, s) for s, t in zip(source.dims, target.dims)],
                   check=False)

    def compose(self, first: "RepMap") -> "RepMap":
        """``self ∘ first``."""
        if first.target != self.source:
            raise RepError("maps are not composable")
        p = self.p
        return RepMap._trusted(first.source, self.target,
                               [el.mul(a, b, p) for a, b in zip(self.comps, first.comps)])

    def __matmul__(self, other: "RepMap") -> "RepMap":
        return self.compose(other)

    def __add__(self, other: "RepMap") -> "RepMap":
        self._same_ends(other)
        return RepMap._trusted(self.source, self.target,
                               [(a + b) % self.p for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other: "RepMap") -> "RepMap":
        self._same_ends(other)
        return RepMap(self.source, self.target,
                      [(a - b) % self.p for a, b in zip(self.comps, other.comps)], check=False)

    def scale(self, c: int) -> "RepMap":
        return RepMap(self.source, self.target, [c * a for a in self.comps], check=False)

    def __neg__(self) -> "RepMap":
        return self.scale(-1)

    def _same_ends(self, other):
        if self.source != other.source or self.target != other.target:
            raise RepError("maps have different endpoints")

    def is_zero(self) -> bool:
        return not any(c.any() for c in self.comps)

    def is_injective(self) -> bool:
        return all(el.is_injective(c, self.p) for c in self.comps)

    def is_surjective(self) -> bool:
        return all(el.is_surjective(c, self.p) for c in self.comps)

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.is_injective()

    def inverse(self) -> "RepMap":
        return RepMap(self.target, self.source, [el.inverse(c, self.p) for c in self.comps],
                      check=False)

    def flat(self) -> np.ndarray:
        return np.concatenate([c.ravel() for c in self.comps]) if self.comps else \
            np.zeros(0, dtype=el.DTYPE)

    def block(self) -> np.ndarray:
        """The map as one block-diagonal matrix (target total x source total)."""
        return el.block_diag(*self.comps)

    @cached_property
    def key(self):
        return (self.source.key, self.target.key, tuple(c.tobytes() for c in self.comps))

    def __eq__(self, other):
        return isinstance(other, RepMap) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"RepMap({self.source.dims} -> {self.target.dims})"

    def to_json(self) -> dict:
        return {"source_dims": list(self.source.dims), "target_dims": list(self.target.dims),
                "comps": {v: c.tolist() for v, c in zip(self.algebra.vertices, self.comps)}}


# ---------------------------------------------------------------------------
# direct sums
# ---------------------------------------------------------------------------


class DirectSum:
    """``M_1 ⊕ ... ⊕ M_n`` with its canonical injections and projections."""

    def __init__(self, summands: Sequence[Rep], algebra: Algebra | None = None):
        summands = list(summands)
        if algebra is None:
            if not summands:
                raise RepError("empty direct sum needs an algebra")
            algebra = summands[0].algebra
        self.summands = summands
        nv = len(algebra.vertices)
        dims = [sum(m.dims[v] for m in summands) for v in range(nv)]
        mats = [el.block_diag(*[m.mats[i] for m in summands]) if summands
                else el.zeros(0, 0) for i in range(len(algebra.arrows))]
        if not summands:
            mats = [el.zeros(0, 0) for _ in algebra.arrows]
        self.obj = Rep(algebra, dims, mats, check=False)
        self._starts = []
        acc = [0] * nv
        for m in summands:
            self._starts.append(tuple(acc))
            acc = [a + d for a, d in zip(acc, m.dims)]

    def injection(self, k: int) -> RepMap:
        m = self.summands[k]
        comps = []
        for v, d in enumerate(m.dims):
            c = el.zeros(self.obj.dims[v], d)
            s = self._starts[k][v]
            c[s:s + d, :] = el.identity(d)
            comps.append(c)
        return RepMap(m, self.obj, comps, check=False)

    def projection(self, k: int) -> RepMap:
        m = self.summands[k]
        comps = []
        for v, d in enumerate(m.dims):
            c = el.zeros(d, self.obj.dims[v])
            s = self._starts[k][v]
            c[:, s:s + d] = el.identity(d)
            comps.append(c)
        return RepMap(self.obj, m, comps, check=False)

    def map_out(self, maps: Sequence[RepMap]) -> RepMap:
        """The map ``⊕ M_k -> N`` given by a row of maps ``M_k -> N``."""
        target = maps[0].target
        comps = [np.hstack([f.comps[v] for f in maps]) for v in range(len(self.obj.dims))]
        return RepMap(self.obj, target, comps, check=False)

    def map_in(self, maps: Sequence[RepMap]) -> RepMap:
        """The map ``N -> ⊕ M_k`` given by a column of maps ``N -> M_k``."""
        source = maps[0].source
        comps = [np.vstack([f.comps[v] for f in maps]) for v in range(len(self.obj.dims))]
        return RepMap(source, self.obj, comps, check=False)


def direct_sum(*reps: Rep) -> Rep:
    return DirectSum(reps).obj


def direct_sum_maps(f: RepMap, g: RepMap) -> RepMap:
    """``f ⊕ g``."""
    src = DirectSum([f.source, g.source])
    tgt = DirectSum([f.target, g.target])
    comps = [el.block_diag(a, b) for a, b in zip(f.comps, g.comps)]
    return RepMap(src.obj, tgt.obj, comps, check=False)


def power(m: Rep, k: int) -> Rep:
    return DirectSum([m] * k, m.algebra).obj


# ---------------------------------------------------------------------------
# kernels, cokernels, images, pullbacks, pushouts
# ---------------------------------------------------------------------------


def _induced_on_sub(m: Rep, bases: List[np.ndarray]) -> Rep:
    """Subrepresentation spanned vertexwise by the columns of ``bases``."""
    vi = m.algebra.quiver.vertex_index
    p = m.p
    lefts = [el.left_inverse(b, p) for b in bases]
    mats = []
    for i, a in enumerate(m.algebra.arrows):
        x, y = vi[a.source], vi[a.target]
        img = el.mul(m.mats[i], bases[x], p)
        mats.append(el.mul(lefts[y], img, p))
    return Rep(m.algebra, [b.shape[1] for b in bases], mats, check=False)


def subrep(m: Rep, bases: List[np.ndarray]) -> Tuple[Rep, RepMap]:
    sub = _induced_on_sub(m, bases)
    return sub, RepMap(sub, m, bases, check=False)


def quotient(m: Rep, bases: List[np.ndarray]) -> Tuple[Rep, RepMap]:
    """``M / U`` for the subrepresentation spanned by ``bases``."""
    vi = m.algebra.quiver.vertex_index
    p = m.p
    cks = [el.cokernel(b, p) for b in bases]
    mats = []
    for i, a in enumerate(m.algebra.arrows):
        x, y = vi[a.source], vi[a.target]
        mats.append(el.mul(el.mul(cks[y].q, m.mats[i], p), cks[x].section, p))
    q = Rep(m.algebra, [c.dim for c in cks], mats, check=False)
    return q, RepMap(m, q, [c.q for c in cks], check=False)


class KerCoker:
    def __init__(self, ker, incl, coker, proj, image, image_incl, coimage_proj):
        self.ker = ker
        self.incl = incl
        self.coker = coker
        self.proj = proj
        self.image = image
        self.image_incl = image_incl      # image -> N
        self.coimage_proj = coimage_proj  # M -> image


def kernel_cokernel(f: RepMap) -> KerCoker:
    p = f.p
    ker, incl = subrep(f.source, [el.kernel_basis(c, p) for c in f.comps])
    coker, proj = quotient(f.target, list(f.comps))
    img_bases = [el.image_basis(c, p) for c in f.comps]
    image, image_incl = subrep(f.target, img_bases)
    lefts = [el.left_inverse(b, p) for b in img_bases]
    coim = RepMap(f.source, image, [el.mul(l, c, p) for l, c in zip(lefts, f.comps)], check=False)
    return KerCoker(ker, incl, coker, proj, image, image_incl, coim)


def kernel(f: RepMap) -> Tuple[Rep, RepMap]:
    return subrep(f.source, [el.kernel_basis(c, f.p) for c in f.comps])


def cokernel(f: RepMap) -> Tuple[Rep, RepMap]:
    return quotient(f.target, list(f.comps))


def factor_through_mono(f: RepMap, mono: RepMap) -> RepMap | None:
    """The unique ``h`` with ``mono ∘ h = f``, or ``None`` if none exists."""
    p = f.p
    comps = []
    for a, m in zip(f.comps, mono.comps):
        x = el.solve(m, a, p) if a.size else el.zeros(m.shape[1], a.shape[1])
        if x is None:
            return None
        comps.append(x)
    return RepMap(f.source, mono.source, comps, check=False)


def factor_through_epi(f: RepMap, epi: RepMap) -> RepMap | None:
    """The unique ``h`` with ``h ∘ epi = f`` (``epi`` surjective), or ``None``."""
    p = f.p
    comps = []
    for a, e in zip(f.comps, epi.comps):
        sec = el.right_inverse(e, p)
        h = el.mul(a, sec, p)
        if not np.array_equal(el.mul(h, e, p), a % p):
            return None
        comps.append(h)
    return RepMap(epi.target, f.target, comps, check=False)


class Pullback:
    """Pullback of ``f: X -> Z`` and ``g: Y -> Z``: corner ``P`` with ``px``, ``py``."""

    def __init__(self, f: RepMap, g: RepMap):
        if f.target != g.target:
            raise RepError("pullback needs a common codomain")
        s = DirectSum([f.source, g.source])
        h = s.map_out([f, -g])
        self.obj, self.incl = kernel(h)
        self.px = s.projection(0) @ self.incl
        self.py = s.projection(1) @ self.incl
        self._sum = s
        self.f, self.g = f, g

    def mediate(self, a: RepMap, b: RepMap) -> RepMap:
        """The map ``W -> P`` induced by ``a: W -> X``, ``b: W -> Y`` with ``fa = gb``."""
        h = factor_through_mono(self._sum.map_in([a, b]), self.incl)
        if h is None:
            raise RepError("square does not commute")
        return h


class Pushout:
    """Pushout of ``f: W -> X`` and ``g: W -> Y``: corner ``Q`` with ``ix``, ``iy``."""

    def __init__(self, f: RepMap, g: RepMap):
        if f.source != g.source:
            raise RepError("pushout needs a common domain")
        s = DirectSum([f.target, g.target])
        h = s.map_in([f, -g])
        self.obj, self.proj = cokernel(h)
        self.ix = self.proj @ s.injection(0)
        self.iy = self.proj @ s.injection(1)
        self._sum = s
        self.f, self.g = f, g

    def mediate(self, a: RepMap, b: RepMap) -> RepMap:
        """The map ``Q -> V`` induced by ``a: X -> V``, ``b: Y -> V`` with ``af = bg``."""
        h = factor_through_epi(self._sum.map_out([a, b]), self.proj)
        if h is None:
            raise RepError("square does not commute")
        return h


def pullback_pushout(f: RepMap, g: RepMap, kind: str):
    """Dispatch helper: ``kind`` is ``"pullback"`` or ``"pushout"``."""
    if kind == "pullback":
        return Pullback(f, g)
    if kind == "pushout":
        return Pushout(f, g)
    raise ValueError(kind)


def stack_maps(maps: Iterable[RepMap]) -> np.ndarray:
    """Flattened maps as the columns of one matrix."""
    cols = [m.flat() for m in maps]
    if not cols:
        return el.zeros(0, 0)
    return np.stack(cols, axis=1)
