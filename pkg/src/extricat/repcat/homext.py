"""Hom spaces, projective presentations, Ext^1 and its realization.

Ext^1(C, A) is computed from the projective presentation
``0 -> Ω -> P0 -> C -> 0`` as the cokernel of restriction
``Hom(P0, A) -> Hom(Ω, A)``.  Coset representatives are the Hom(Ω, A) basis
elements at the pivot-complement positions, so coordinates are canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from .. import exactlin as el
from ..algebra import Algebra, AlgebraError
from .rep import (DirectSum, Pullback, Pushout, Rep, RepError, RepMap, factor_through_mono,
                  kernel, stack_maps)


# ---------------------------------------------------------------------------
# Hom
# ---------------------------------------------------------------------------


class HomSpace:
    """A basis of Hom(M, N) together with coordinate extraction."""

    def __init__(self, source: Rep, target: Rep, basis: List[RepMap], mat: np.ndarray):
        self.source = source
        self.target = target
        self.basis = basis
        self._mat = mat          # columns: flattened basis maps

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, f: RepMap) -> np.ndarray:
        """Coordinates of ``f`` in the basis (``f`` must lie in Hom(M, N))."""
        if self.dim == 0:
            return np.zeros(0, dtype=el.DTYPE)
        x = el.solve(self._mat, f.flat(), f.p)
        if x is None:
            raise RepError("map is not in this Hom space")
        return x

    def element(self, coords: Sequence[int]) -> RepMap:
        p = self.source.p
        out = RepMap.zero(self.source, self.target)
        comps = [c.copy() for c in out.comps]
        for c, b in zip(coords, self.basis):
            c = int(c) % p
            if c:
                for v in range(len(comps)):
                    comps[v] = (comps[v] + c * b.comps[v]) % p
        return RepMap(self.source, self.target, comps, check=False)

    def elements(self, limit: int | None = None):
        """All elements in coefficient-code order (code 0 = zero map first)."""
        for v in el.enumerate_vectors(self.dim, self.source.p, limit):
            yield self.element(v)

    def block_stack(self) -> np.ndarray:
        """Basis maps as a (dim, N_total, M_total) block-diagonal stack."""
        nt, mt = self.target.total_dim, self.source.total_dim
        out = np.zeros((self.dim, nt, mt), dtype=el.DTYPE)
        for i, b in enumerate(self.basis):
            out[i] = b.block()
        return out

    def from_block(self, m: np.ndarray) -> RepMap:
        to, so = self.target.offsets, self.source.offsets
        comps = [m[to[v]:to[v + 1], so[v]:so[v + 1]] for v in range(len(self.source.dims))]
        return RepMap(self.source, self.target, comps, check=False)


def _hom_constraints(m: Rep, n: Rep) -> Tuple[np.ndarray, List[int]]:
    vi = m.algebra.quiver.vertex_index
    sizes = [n.dims[v] * m.dims[v] for v in range(len(m.dims))]
    offs = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    nunk = int(offs[-1])
    blocks = []
    for i, a in enumerate(m.algebra.arrows):
        x, y = vi[a.source], vi[a.target]
        # unknown F_v is n_v x m_v, row-major.  Constraint F_y M_a - N_a F_x = 0
        # (shape n_y x m_x).
        rows = n.dims[y] * m.dims[x]
        blk = np.zeros((rows, nunk), dtype=el.DTYPE)
        blk[:, offs[y]:offs[y + 1]] = np.kron(el.identity(n.dims[y]), m.mats[i].T)
        blk[:, offs[x]:offs[x + 1]] -= np.kron(n.mats[i], el.identity(m.dims[x]))
        blocks.append(blk)
    cons = np.vstack(blocks) if blocks else el.zeros(0, nunk)
    return cons % m.p, [int(o) for o in offs]


@lru_cache(maxsize=1 << 16)
def hom_space(m: Rep, n: Rep) -> HomSpace:
    if m.algebra is not n.algebra:
        raise RepError("Hom between representations of different algebras")
    cons, offs = _hom_constraints(m, n)
    ker = el.kernel_basis(cons, m.p)
    basis = []
    for j in range(ker.shape[1]):
        vec = ker[:, j]
        comps = [vec[offs[v]:offs[v + 1]].reshape(n.dims[v], m.dims[v])
                 for v in range(len(m.dims))]
        basis.append(RepMap(m, n, comps, check=False))
    mat = ker if ker.size else el.zeros(offs[-1], 0)
    return HomSpace(m, n, basis, mat)


def hom_basis(m: Rep, n: Rep) -> List[RepMap]:
    return list(hom_space(m, n).basis)


def hom_dim(m: Rep, n: Rep) -> int:
    return hom_space(m, n).dim


# ---------------------------------------------------------------------------
# indecomposable projectives / injectives
# ---------------------------------------------------------------------------


def projective_of_vertex(a: Algebra, v: str) -> Rep:
    """P_v: basis at w = basis paths v -> w, arrows act by composition."""
    if v not in a.quiver.vertex_index:
        raise AlgebraError(f"unknown vertex {v!r}")
    return _projective_cached(a, v)


@lru_cache(maxsize=None)
def _projective_cached(a: Algebra, v: str) -> Rep:
    dims = [len(a.basis_paths(v, w)) for w in a.vertices]
    mats = []
    for arr in a.arrows:
        src = a.basis_paths(v, arr.source)
        tgt_dim = len(a.basis_paths(v, arr.target))
        m = el.zeros(tgt_dim, len(src))
        for j, q in enumerate(src):
            m[:, j] = a.reduce(v, arr.target, q + (arr.label,))
        mats.append(m)
    return Rep(a, dims, mats)


def injective_of_vertex(a: Algebra, v: str) -> Rep:
    """I_v: dual of the paths ending at v."""
    if v not in a.quiver.vertex_index:
        raise AlgebraError(f"unknown vertex {v!r}")
    return _injective_cached(a, v)


@lru_cache(maxsize=None)
def _injective_cached(a: Algebra, v: str) -> Rep:
    dims = [len(a.basis_paths(w, v)) for w in a.vertices]
    mats = []
    for arr in a.arrows:
        # precomposition with arr: paths(target, v) -> paths(source, v), then transpose
        tgt_paths = a.basis_paths(arr.target, v)
        src_dim = len(a.basis_paths(arr.source, v))
        pre = el.zeros(src_dim, len(tgt_paths))
        for j, q in enumerate(tgt_paths):
            pre[:, j] = a.reduce(arr.source, v, (arr.label,) + q)
        mats.append(np.ascontiguousarray(pre.T))
    return Rep(a, dims, mats)


def regular_dims(a: Algebra) -> Tuple[int, ...]:
    tot = [0] * len(a.vertices)
    for v in a.vertices:
        for i, d in enumerate(projective_of_vertex(a, v).dims):
            tot[i] += d
    return tuple(tot)


# ---------------------------------------------------------------------------
# maps out of projectives, projective covers
# ---------------------------------------------------------------------------


def map_from_projective(v: str, target: Rep, x: np.ndarray) -> RepMap:
    """The map P_v -> M sending the generator e_v to ``x`` in M_v."""
    a = target.algebra
    pv = projective_of_vertex(a, v)
    x = np.asarray(x, dtype=el.DTYPE).reshape(-1)
    comps = []
    for w in a.vertices:
        paths = a.basis_paths(v, w)
        c = el.zeros(target.dim_at(w), len(paths))
        for j, q in enumerate(paths):
            c[:, j] = el.mul(target.eval_path(q, v), x.reshape(-1, 1), target.p)[:, 0]
        comps.append(c)
    return RepMap(pv, target, comps, check=False)


@dataclass
class ProjectiveCover:
    """``0 -> omega -> P -> M -> 0`` with P = ⊕ P_v over top generators."""

    module: Rep
    P: Rep
    epi: RepMap
    omega: Rep
    incl: RepMap
    generators: List[Tuple[str, np.ndarray]]   # (vertex, element of M_v)
    summand_sum: DirectSum

    def lift(self, through: RepMap) -> RepMap:
        """A map g: P -> B with ``through ∘ g = epi`` (``through``: B -> M surjective)."""
        p = self.module.p
        maps = []
        for v, x in self.generators:
            vi = self.module.algebra.quiver.vertex_index[v]
            y = el.solve(through.comps[vi], x, p)
            if y is None:
                raise RepError("cannot lift: map is not surjective onto the generators")
            maps.append(map_from_projective(v, through.source, y))
        if not maps:
            return RepMap.zero(self.P, through.source)
        return self.summand_sum.map_out(maps)


@lru_cache(maxsize=1 << 14)
def projective_cover(m: Rep) -> ProjectiveCover:
    a = m.algebra
    vi = a.quiver.vertex_index
    gens: List[Tuple[str, np.ndarray]] = []
    for v in a.vertices:
        iv = vi[v]
        imgs = [m.mats[i] for i, arr in enumerate(a.arrows) if arr.target == v]
        rad = np.hstack(imgs) if imgs else el.zeros(m.dims[iv], 0)
        if rad.shape[1] == 0:
            rad = el.zeros(m.dims[iv], 0)
        ck = el.cokernel(rad, m.p)
        for j in range(ck.dim):
            gens.append((v, ck.section[:, j].copy()))
    summands = [projective_of_vertex(a, v) for v, _ in gens]
    ds = DirectSum(summands, a)
    if gens:
        epi = ds.map_out([map_from_projective(v, m, x) for v, x in gens])
    else:
        epi = RepMap.zero(ds.obj, m)
    omega, incl = kernel(epi)
    return ProjectiveCover(m, ds.obj, epi, omega, incl, gens, ds)


def is_projective(m: Rep) -> bool:
    return projective_cover(m).omega.is_zero()


# ---------------------------------------------------------------------------
# Ext^1
# ---------------------------------------------------------------------------


class ExtSpace:
    """Ext^1(C, A) with canonical coset representatives in Hom(Ω, A)."""

    def __init__(self, C: Rep, A: Rep):
        if C.algebra is not A.algebra:
            raise RepError("Ext between representations of different algebras")
        self.C, self.A = C, A
        p = C.p
        self.cover = projective_cover(C)
        self.hom_omega = hom_space(self.cover.omega, A)
        h = self.hom_omega.dim
        restr = [g @ self.cover.incl for g in hom_space(self.cover.P, A).basis]
        if restr and h:
            img = np.stack([self.hom_omega.coords(r) for r in restr], axis=1)
        else:
            img = el.zeros(h, 0)
        ck = el.cokernel(img, p)
        self._q = ck.q
        self.dim = ck.dim
        self._reps = [self.hom_omega.element(ck.section[:, k]) for k in range(ck.dim)]

    def representative(self, coords: Sequence[int]) -> RepMap:
        """The map Ω -> A representing the class with the given coordinates."""
        coords = np.asarray(coords, dtype=el.DTYPE).reshape(-1)
        if coords.shape[0] != self.dim:
            raise RepError(f"expected {self.dim} coordinates, got {coords.shape[0]}")
        out = RepMap.zero(self.cover.omega, self.A)
        for c, r in zip(coords, self._reps):
            if c % self.C.p:
                out = out + r.scale(int(c))
        return out

    def coords_of(self, u: RepMap) -> Tuple[int, ...]:
        """Coordinates of the class of a map Ω -> A."""
        if self.dim == 0:
            return ()
        c = self.hom_omega.coords(u)
        return tuple(int(x) for x in el.mul(self._q, c.reshape(-1, 1), self.C.p)[:, 0])

    def classes(self, limit: int | None = None):
        for v in el.enumerate_vectors(self.dim, self.C.p, limit):
            yield ExtClass(self.C, self.A, tuple(int(x) for x in v))

    def zero(self) -> "ExtClass":
        return ExtClass(self.C, self.A, (0,) * self.dim)


@lru_cache(maxsize=1 << 16)
def ext_space(C: Rep, A: Rep) -> ExtSpace:
    return ExtSpace(C, A)


def ext_basis(C: Rep, A: Rep) -> ExtSpace:
    return ext_space(C, A)


def ext_dim(C: Rep, A: Rep) -> int:
    return ext_space(C, A).dim


@dataclass(frozen=True)
class ExtClass:
    C: Rep
    A: Rep
    coords: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(x) % self.C.p for x in self.coords))
        if len(self.coords) != ext_dim(self.C, self.A):
            raise RepError("coordinate vector has the wrong length")

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "ExtClass") -> "ExtClass":
        if (self.C, self.A) != (other.C, other.A):
            raise RepError("adding classes from different Ext groups")
        return ExtClass(self.C, self.A, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def to_json(self) -> dict:
        return {"coords": list(self.coords)}


class Conflation:
    """A short exact sequence ``A --incl--> B --proj--> C``."""

    def __init__(self, incl: RepMap, proj: RepMap, check: bool = True):
        if incl.target != proj.source:
            raise RepError("conflation maps are not composable")
        self.incl = incl
        self.proj = proj
        if check and not self.is_exact():
            raise RepError("sequence is not short exact")

    @property
    def A(self) -> Rep:
        return self.incl.source

    @property
    def B(self) -> Rep:
        return self.incl.target

    @property
    def C(self) -> Rep:
        return self.proj.target

    def is_exact(self) -> bool:
        if not (self.proj @ self.incl).is_zero():
            return False
        if not (self.incl.is_injective() and self.proj.is_surjective()):
            return False
        return all(a + c == b for a, b, c in zip(self.A.dims, self.B.dims, self.C.dims))

    @classmethod
    def split(cls, C: Rep, A: Rep) -> "Conflation":
        ds = DirectSum([A, C])
        return cls(ds.injection(0), ds.projection(1), check=False)

    @classmethod
    def trivial_right(cls, C: Rep) -> "Conflation":
        """``0 -> C -> C``."""
        z = Rep.zero(C.algebra)
        return cls(RepMap.zero(z, C), RepMap.identity(C), check=False)

    @classmethod
    def trivial_left(cls, C: Rep) -> "Conflation":
        """``C -> C -> 0``."""
        z = Rep.zero(C.algebra)
        return cls(RepMap.identity(C), RepMap.zero(C, z), check=False)

    def __repr__(self):
        return f"Conflation({self.A.dims} -> {self.B.dims} -> {self.C.dims})"


def ext_to_conflation(delta: ExtClass) -> Conflation:
    """Pushout of the presentation of C along the representative Ω -> A."""
    sp = ext_space(delta.C, delta.A)
    u = sp.representative(delta.coords)
    po = Pushout(sp.cover.incl, u)
    q = po.mediate(sp.cover.epi, RepMap.zero(delta.A, delta.C))
    return Conflation(po.iy, q, check=False)


def conflation_to_ext(c: Conflation) -> ExtClass:
    """Lift P0 -> C through B, restrict to Ω, factor through A, read coordinates."""
    sp = ext_space(c.C, c.A)
    g = sp.cover.lift(c.proj)
    u = factor_through_mono(g @ sp.cover.incl, c.incl)
    if u is None:
        raise RepError("restriction does not factor: input is not exact")
    return ExtClass(c.C, c.A, sp.coords_of(u))


def pushout_conflation(c: Conflation, a: RepMap) -> Conflation:
    """``a_*`` on realizations: A' -> Q -> C for ``a: A -> A'``."""
    if a.source != c.A:
        raise RepError("a must start at the left end of the conflation")
    po = Pushout(c.incl, a)
    q = po.mediate(c.proj, RepMap.zero(a.target, c.C))
    return Conflation(po.iy, q, check=False)


def pullback_conflation(c: Conflation, g: RepMap) -> Conflation:
    """``g^*`` on realizations: A -> P -> C' for ``g: C' -> C``."""
    if g.target != c.C:
        raise RepError("c must end at the right end of the conflation")
    pb = Pullback(c.proj, g)
    i = pb.mediate(c.incl, RepMap.zero(c.A, g.source))
    return Conflation(i, pb.py, check=False)


def ext_transport_realized(delta: ExtClass, a: RepMap | None = None,
                           c: RepMap | None = None) -> ExtClass:
    """``c^* a_* δ`` (either map may be omitted), via pushout and pullback of a
    realizing conflation.  Slower than :func:`ext_transport`; kept as an
    independent cross-check."""
    conf = ext_to_conflation(delta)
    if a is not None:
        if a.source != delta.A:
            raise RepError("a must start at A")
        conf = pushout_conflation(conf, a)
    if c is not None:
        if c.target != delta.C:
            raise RepError("c must end at C")
        conf = pullback_conflation(conf, c)
    return conflation_to_ext(conf)


def ext_transport(delta: ExtClass, a: RepMap | None = None,
                  c: RepMap | None = None) -> ExtClass:
    """``c^* a_* δ`` (either map may be omitted) by composing representatives.

    ``a_*`` is ``u -> a∘u``; ``c^*`` lifts ``c`` to the projective
    presentations and precomposes.
    """
    C, A = delta.C, delta.A
    if a is not None and a.source != A:
        raise RepError("a must start at A")
    if c is not None and c.target != C:
        raise RepError("c must end at C")
    u = ext_space(C, A).representative(delta.coords)
    if a is not None:
        u = a @ u
        A = a.target
    if c is not None:
        src_cov = projective_cover(c.source)
        tgt_cov = projective_cover(C)
        # lift c∘epi' through epi, restrict to Ω'
        g = _lift_from(src_cov, tgt_cov.epi, c @ src_cov.epi)
        omega_map = factor_through_mono(g @ src_cov.incl, tgt_cov.incl)
        u = u @ omega_map
        C = c.source
    return ExtClass(C, A, ext_space(C, A).coords_of(u))


def _lift_from(cover: ProjectiveCover, epi: RepMap, f: RepMap) -> RepMap:
    """Lift ``f: P -> M`` (P the cover's projective) through a surjection ``epi: N -> M``."""
    p = f.p
    a = f.algebra
    vi = a.quiver.vertex_index
    maps = []
    ds = cover.summand_sum
    for k, (v, _) in enumerate(cover.generators):
        inj = ds.injection(k)
        fk = f @ inj
        # image of the generator e_v of P_v: the column of the identity path
        gen_img = fk.comps[vi[v]][:, 0]
        y = el.solve(epi.comps[vi[v]], gen_img, p)
        if y is None:
            raise RepError("cannot lift")
        maps.append(map_from_projective(v, epi.source, y))
    if not maps:
        return RepMap.zero(cover.P, epi.source)
    return ds.map_out(maps)


def clear_caches() -> None:
    hom_space.cache_clear()
    ext_space.cache_clear()
    projective_cover.cache_clear()
