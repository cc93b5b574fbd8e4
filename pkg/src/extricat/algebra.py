"""Bound quiver algebras kQ/I over F_p for finite acyclic quivers.

Paths are tuples of arrow labels in traversal order: ``("a", "b")`` means
first ``a`` then ``b`` (written ``b*a`` in composition notation).  The
trivial path at a vertex is the empty tuple together with its endpoints.

Representations are covariant: an arrow ``x -> y`` acts by a linear map
``V_x -> V_y``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from graphlib import CycleError, TopologicalSorter
from typing import Dict, List, Sequence, Tuple

import numpy as np

from . import exactlin as el
from .exactlin import FieldSpec

Path = Tuple[str, ...]


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    label: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        arrows = tuple(a if isinstance(a, Arrow) else Arrow(*map(str, a)) for a in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        labels = list(self.vertices) + [a.label for a in arrows]
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("duplicate vertex label")
        if len(set(a.label for a in arrows)) != len(arrows):
            raise AlgebraError("duplicate arrow label")
        del labels
        for a in arrows:
            if a.source not in self.vertices or a.target not in self.vertices:
                raise AlgebraError(f"arrow {a.label} has an unknown endpoint")
        graph = {v: set() for v in self.vertices}
        for a in arrows:
            graph[a.target].add(a.source)
        try:
            tuple(TopologicalSorter(graph).static_order())
        except CycleError as exc:
            raise AlgebraError("quiver has an oriented cycle") from exc

    @cached_property
    def arrow_index(self) -> Dict[str, int]:
        return {a.label: i for i, a in enumerate(self.arrows)}

    @cached_property
    def vertex_index(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def arrow(self, label: str) -> Arrow:
        return self.arrows[self.arrow_index[label]]

    def out_arrows(self, v: str) -> List[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def in_arrows(self, v: str) -> List[Arrow]:
        return [a for a in self.arrows if a.target == v]

    def endpoints(self, path: Path, start: str | None = None) -> Tuple[str, str]:
        if not path:
            if start is None:
                raise AlgebraError("trivial path needs an explicit vertex")
            return start, start
        arrows = [self.arrow(x) for x in path]
        for a, b in zip(arrows, arrows[1:]):
            if a.target != b.source:
                raise AlgebraError(f"path {path} is not composable")
        return arrows[0].source, arrows[-1].target

    def paths_from(self, v: str) -> List[Path]:
        """All paths starting at ``v`` (finite, the quiver being acyclic)."""
        out: List[Path] = [()]
        frontier: List[Tuple[Path, str]] = [((), v)]
        while frontier:
            nxt = []
            for path, end in frontier:
                for a in self.out_arrows(end):
                    q = path + (a.label,)
                    out.append(q)
                    nxt.append((q, a.target))
            frontier = nxt
        return out


@dataclass(frozen=True)
class Relation:
    """A linear combination of parallel paths of length at least 2."""

    terms: Tuple[Tuple[int, Path], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((int(c), tuple(pth)) for c, pth in self.terms))
        if not self.terms:
            raise AlgebraError("empty relation")
        for _, pth in self.terms:
            if len(pth) < 2:
                raise AlgebraError("relation paths must have length >= 2")

    def endpoints(self, q: Quiver) -> Tuple[str, str]:
        ends = {q.endpoints(pth) for _, pth in self.terms}
        if len(ends) != 1:
            raise AlgebraError(f"relation paths are not parallel: {self.terms}")
        return ends.pop()

    def __str__(self):
        parts = []
        for c, pth in self.terms:
            word = "*".join(reversed(pth))
            parts.append(f"{c}*{word}" if c != 1 else word)
        return " + ".join(parts)


def _path_sort_key(path: Path):
    return (len(path), path)


@dataclass(frozen=True, eq=False)
class Algebra:
    """kQ/I with a canonical basis of residue classes of paths."""

    quiver: Quiver
    relations: Tuple[Relation, ...]
    field: FieldSpec
    name: str = ""
    # (source, target) -> basis paths (shortest first)
    path_basis: Dict[Tuple[str, str], List[Path]] = field(default_factory=dict, repr=False)
    _reduce: Dict[Tuple[str, str], Dict[Path, np.ndarray]] = field(default_factory=dict, repr=False)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def vertices(self):
        return self.quiver.vertices

    @property
    def arrows(self):
        return self.quiver.arrows

    @cached_property
    def dim(self) -> int:
        return sum(len(b) for b in self.path_basis.values())

    def basis_paths(self, s: str, t: str) -> List[Path]:
        return self.path_basis.get((s, t), [])

    def reduce(self, s: str, t: str, path: Path) -> np.ndarray:
        """Coordinates of the class of ``path`` in the basis of e_t A e_s."""
        try:
            return self._reduce[(s, t)][path]
        except KeyError:
            raise AlgebraError(f"{path} is not a path from {s} to {t}") from None

    @cached_property
    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(repr((self.field.p, self.quiver.vertices,
                       [(a.label, a.source, a.target) for a in self.quiver.arrows],
                       [r.terms for r in self.relations])).encode())
        return h.hexdigest()[:16]

    def __repr__(self):
        return f"Algebra({self.name or self.digest}, dim={self.dim}, {self.field})"


def build_algebra(q: Quiver, rels: Sequence[Relation] = (), f: FieldSpec = FieldSpec(2),
                  name: str = "") -> Algebra:
    """Path basis of kQ/I by enumerating paths and reducing modulo the ideal.

    The ideal is spanned, between each pair of vertices, by all ``w r u``
    for generating relations ``r`` and paths ``u``, ``w``.  Longer paths come
    first in the column order so they are the ones eliminated.
    """
    p = f.p
    rels = tuple(rels)
    ends = [r.endpoints(q) for r in rels]
    paths: Dict[Tuple[str, str], List[Path]] = {}
    for v in q.vertices:
        for pth in q.paths_from(v):
            s, t = q.endpoints(pth, v)
            paths.setdefault((s, t), []).append(pth)
    into: Dict[str, List[Path]] = {v: [] for v in q.vertices}
    for (s, t), lst in paths.items():
        into[t].extend(lst)

    path_basis: Dict[Tuple[str, str], List[Path]] = {}
    reducer: Dict[Tuple[str, str], Dict[Path, np.ndarray]] = {}
    for (s, t), lst in sorted(paths.items()):
        cols = sorted(lst, key=lambda x: (-len(x), x))
        col_of = {pth: i for i, pth in enumerate(cols)}
        rows = []
        for r, (rs, rt) in zip(rels, ends):
            befores = [u for u in paths.get((s, rs), [])]
            afters = [w for w in paths.get((rt, t), [])]
            for u in befores:
                for w in afters:
                    vec = np.zeros(len(cols), dtype=el.DTYPE)
                    for c, pth in r.terms:
                        vec[col_of[u + pth + w]] += c
                    rows.append(vec % p)
        if rows:
            red, piv = el.rref(np.array(rows, dtype=el.DTYPE), p)
        else:
            red, piv = el.zeros(0, len(cols)), np.zeros(0, dtype=el.DTYPE)
        pivset = set(int(c) for c in piv)
        basis = sorted((cols[i] for i in range(len(cols)) if i not in pivset), key=_path_sort_key)
        bpos = {pth: i for i, pth in enumerate(basis)}
        red_map: Dict[Path, np.ndarray] = {}
        for i, pth in enumerate(cols):
            vec = np.zeros(len(basis), dtype=el.DTYPE)
            if pth in bpos:
                vec[bpos[pth]] = 1
            else:
                row = red[list(piv).index(i)]
                for j, other in enumerate(cols):
                    if j != i and row[j]:
                        vec[bpos[other]] = (vec[bpos[other]] - row[j]) % p
            red_map[pth] = vec
        if basis:
            path_basis[(s, t)] = basis
        reducer[(s, t)] = red_map
    return Algebra(q, rels, f, name, path_basis, reducer)


def path_algebra(vertices, arrows, relations=(), p: int = 2, name: str = "") -> Algebra:
    """Convenience constructor from plain tuples."""
    q = Quiver(tuple(vertices), tuple(Arrow(*a) for a in arrows))
    rels = [r if isinstance(r, Relation) else Relation(tuple(r)) for r in relations]
    return build_algebra(q, rels, FieldSpec(p), name)


def a2(p: int = 2) -> Algebra:
    """The path algebra of 1 --alpha--> 2."""
    return path_algebra(["1", "2"], [("alpha", "1", "2")], p=p, name="kA2")


def single_vertex(p: int = 2) -> Algebra:
    return path_algebra(["1"], [], p=p, name="k")
