"""Catalogs of indecomposable representations within dimension bounds."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .. import exactlin as el
from .. import kernels
from ..algebra import Algebra
from ..verdict import DEFAULT_CAPS, CapExceeded, Caps
from .decomp import find_isomorphism, indecomposable_summands
from .homext import ext_dim, hom_dim
from .rep import Rep

SCAN_CHUNK = 1 << 16
SCAN_LIMIT = 1 << 26   # refuse dimension vectors with more arrow-matrix tuples than this


class CatalogMiss(LookupError):
    """An indecomposable that is not isomorphic to any catalog entry."""


class NameError_(KeyError):
    pass


class Catalog:
    """Pairwise non-isomorphic indecomposables with names and Hom/Ext tables."""

    def __init__(self, algebra: Algebra, indecs: Sequence[Rep], bounds: Tuple[int, ...] = (),
                 strategy: str = "given", unknown: int = 0, caps: Caps = DEFAULT_CAPS):
        order = sorted(range(len(indecs)), key=lambda i: (indecs[i].total_dim, indecs[i].dims, i))
        self.algebra = algebra
        self.indecs: List[Rep] = [indecs[i] for i in order]
        self.names: List[str] = [f"M{k + 1}" for k in range(len(self.indecs))]
        self.aliases: Dict[str, int] = {}
        self.bounds = tuple(bounds)
        self.strategy = strategy
        self.unknown = unknown
        self.caps = caps
        self._ident: Dict = {}
        self._decomp: Dict = {}

    def __len__(self):
        return len(self.indecs)

    def __iter__(self):
        return iter(self.indecs)

    # naming -------------------------------------------------------------
    def add_alias(self, alias: str, index: int) -> None:
        self.aliases[alias] = index

    def display_name(self, i: int) -> str:
        """Preferred alias (first registered) or the canonical name."""
        for a, j in self.aliases.items():
            if j == i:
                return a
        return self.names[i]

    def index_of(self, name: str) -> int:
        name = name.strip()
        if name in self.aliases:
            return self.aliases[name]
        if name in self.names:
            return self.names.index(name)
        raise NameError_(f"unknown object name {name!r}")

    def resolve(self, names: Iterable[str]) -> List[int]:
        return [self.index_of(n) for n in names if n.strip()]

    # identification -----------------------------------------------------
    def identify(self, m: Rep) -> int:
        """Index of the catalog entry isomorphic to the indecomposable ``m``."""
        hit = self._ident.get(m.key)
        if hit is not None:
            return hit
        for i, x in enumerate(self.indecs):
            if x.dims == m.dims and find_isomorphism(x, m, self.caps.enum_cap) is not None:
                self._ident[m.key] = i
                return i
        raise CatalogMiss(f"indecomposable with dims {m.dims} is not in the catalog")

    def decompose(self, m: Rep) -> Counter:
        """Multiplicities of catalog entries in ``m`` (raises CatalogMiss/CapExceeded)."""
        hit = self._decomp.get(m.key)
        if hit is not None:
            return Counter(hit)
        cnt: Counter = Counter()
        for part in indecomposable_summands(m, self.caps.enum_cap):
            cnt[self.identify(part)] += 1
        self._decomp[m.key] = dict(cnt)
        return cnt

    def support(self, m: Rep) -> frozenset:
        return frozenset(self.decompose(m))

    # tables ---------------------------------------------------------------
    def hom_table(self) -> np.ndarray:
        n = len(self)
        return np.array([[hom_dim(x, y) for y in self.indecs] for x in self.indecs],
                        dtype=np.int64).reshape(n, n)

    def ext_table(self) -> np.ndarray:
        """``T[i, j] = dim Ext^1(M_i, M_j)``."""
        n = len(self)
        return np.array([[ext_dim(x, y) for y in self.indecs] for x in self.indecs],
                        dtype=np.int64).reshape(n, n)

    # serialization ------------------------------------------------------
    def to_json(self, tables: bool = True) -> dict:
        out = {
            "algebra": self.algebra.digest,
            "field": self.algebra.p,
            "bounds": list(self.bounds),
            "strategy": self.strategy,
            "unknown": self.unknown,
            "objects": [{"name": nm, "alias": self.display_name(i)
                         if self.display_name(i) != nm else None, **x.to_json()}
                        for i, (nm, x) in enumerate(zip(self.names, self.indecs))],
            "aliases": dict(sorted(self.aliases.items())),
        }
        if tables:
            out["hom"] = self.hom_table().tolist()
            out["ext"] = self.ext_table().tolist()
        return out

    @classmethod
    def from_json(cls, algebra: Algebra, data: dict, caps: Caps = DEFAULT_CAPS) -> "Catalog":
        if data["algebra"] != algebra.digest:
            raise ValueError("catalog belongs to a different algebra")
        reps = [Rep.from_json(algebra, o) for o in data["objects"]]
        cat = cls(algebra, reps, tuple(data["bounds"]), data["strategy"], data["unknown"], caps)
        cat.indecs = reps   # already in canonical order
        for a, i in data["aliases"].items():
            cat.add_alias(a, i)
        return cat

    def same_as(self, other: "Catalog") -> bool:
        """Equal content: same algebra (by digest), objects, names and aliases.

        Rep equality is per algebra instance, so objects are compared by data.
        """
        data = lambda c: [(x.dims, tuple(m.tobytes() for m in x.mats)) for x in c.indecs]
        return (self.algebra.digest == other.algebra.digest and self.names == other.names
                and data(self) == data(other) and self.aliases == other.aliases)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def _relation_arrays(a: Algebra):
    ai = a.quiver.arrow_index
    rel_ptr, coefs, term_ptr, arrows = [0], [], [0], []
    for r in a.relations:
        for c, path in r.terms:
            coefs.append(c % a.p)
            arrows.extend(ai[x] for x in path)
            term_ptr.append(len(arrows))
        rel_ptr.append(len(coefs))
    as_arr = lambda x: np.asarray(x, dtype=np.int64)
    return as_arr(rel_ptr), as_arr(coefs), as_arr(term_ptr), as_arr(arrows)


def decode_rep(a: Algebra, dims: Sequence[int], code: int) -> Rep:
    vi = a.quiver.vertex_index
    mats = []
    c = int(code)
    for arr in a.arrows:
        r, s = dims[vi[arr.target]], dims[vi[arr.source]]
        m = np.zeros(r * s, dtype=el.DTYPE)
        for i in range(r * s):
            m[i] = c % a.p
            c //= a.p
        mats.append(m.reshape(r, s))
    return Rep(a, dims, mats, check=False)


@dataclass
class ScanStats:
    dims: Tuple[int, ...]
    codes: int
    valid: int = 0
    indecomposable: int = 0
    unknown: int = 0
    classes: int = 0


def scan_dimension_vector(a: Algebra, dims: Sequence[int], caps: Caps = DEFAULT_CAPS):
    """Status array (see :func:`kernels.scan_reps`) for every tuple of this dim vector."""
    vi = a.quiver.vertex_index
    src = np.array([vi[x.source] for x in a.arrows], dtype=np.int64)
    tgt = np.array([vi[x.target] for x in a.arrows], dtype=np.int64)
    dv = np.asarray(dims, dtype=np.int64)
    nent = int(sum(dv[t] * dv[s] for s, t in zip(src, tgt)))
    total = a.p ** nent
    if total > SCAN_LIMIT:
        raise CapExceeded("scan_limit", f"{total} tuples for dimension vector {tuple(dims)}")
    rel = _relation_arrays(a)
    statuses, enddims = [], []
    for lo in range(0, total, SCAN_CHUNK):
        hi = min(total, lo + SCAN_CHUNK)
        st, ed = kernels.scan_reps(a.p, dv, src, tgt, *rel, lo, hi, caps.enum_cap)
        statuses.append(st)
        enddims.append(ed)
    return np.concatenate(statuses), np.concatenate(enddims)


def enumerate_indecomposables(a: Algebra, bounds: Sequence[int] | int = 2,
                              caps: Caps = DEFAULT_CAPS) -> Catalog:
    """All indecomposables with ``dim_v <= bounds[v]``, up to isomorphism.

    Every arrow-matrix tuple is classified by the compiled scan kernel;
    indecomposable tuples are then merged into isomorphism classes, keeping
    the first tuple (in code order) as the representative.
    """
    nv = len(a.vertices)
    if isinstance(bounds, int):
        bounds = (bounds,) * nv
    bounds = tuple(int(b) for b in bounds)
    if len(bounds) != nv:
        raise ValueError("one bound per vertex expected")
    dvs = [d for d in itertools.product(*[range(b + 1) for b in bounds]) if any(d)]
    dvs.sort(key=lambda d: (sum(d), d))
    reps: List[Rep] = []
    unknown = 0
    stats = []
    for d in dvs:
        status, enddim = scan_dimension_vector(a, d, caps)
        st = ScanStats(d, int(status.shape[0]), int((status >= 0).sum()),
                       int((status == 1).sum()), int((status == 2).sum()))
        unknown += st.unknown
        same: List[Tuple[Rep, int]] = []
        for code in np.flatnonzero(status == 1):
            m = decode_rep(a, d, int(code))
            e = int(enddim[code])
            if any(e == ed and find_isomorphism(x, m, caps.enum_cap) is not None
                   for x, ed in same):
                continue
            same.append((m, e))
        st.classes = len(same)
        stats.append(st)
        reps.extend(m for m, _ in same)
    cat = Catalog(a, reps, bounds, "modules", unknown, caps)
    cat.scan_stats = stats
    return cat


def catalog_from_candidates(a: Algebra, candidates: Iterable[Rep], caps: Caps = DEFAULT_CAPS,
                            strategy: str = "candidates", bounds=()) -> Catalog:
    """Decompose every candidate and keep one representative per iso class."""
    reps: List[Rep] = []
    unknown = 0
    for c in candidates:
        if c.is_zero():
            continue
        try:
            parts = indecomposable_summands(c, caps.enum_cap)
        except CapExceeded:
            unknown += 1
            continue
        for part in parts:
            if not any(x.dims == part.dims and find_isomorphism(x, part, caps.enum_cap)
                       is not None for x in reps):
                reps.append(part)
    return Catalog(a, reps, tuple(bounds), strategy, unknown, caps)
