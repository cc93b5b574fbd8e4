"""Krull–Schmidt decomposition and isomorphism testing.

Both searches run over a Hom/End basis with the compiled kernels in
:mod:`extricat.kernels`: basis elements first (cheap Fitting test), then an
exhaustive sweep of all coefficient vectors while ``p**dim <= cap``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from .. import exactlin as el
from .. import kernels
from ..verdict import DEFAULT_CAPS, CapExceeded, Caps, Verdict
from .homext import hom_space
from .rep import Rep, RepMap, subrep


def _code_to_block(basis: np.ndarray, code: int, p: int) -> np.ndarray:
    coeffs = el.code_to_vector(code, basis.shape[0], p)
    return np.tensordot(coeffs, basis, axes=1) % p


def _stable_power(e: np.ndarray, p: int) -> np.ndarray:
    n = e.shape[0]
    x = e.copy()
    s = 1
    while s < n:
        x = el.mul(x, x, p)
        s *= 2
    return x


def split_once(m: Rep, cap: int) -> Optional[Tuple[Rep, Rep]]:
    """Split ``m = ker(e^N) ⊕ im(e^N)`` for some non-trivial e in End(m).

    Returns ``None`` when End(m) is certified local (``m`` indecomposable);
    raises :class:`CapExceeded` if the search was cut off.
    """
    if m.is_zero():
        raise ValueError("the zero representation has no decomposition")
    hs = hom_space(m, m)
    if hs.dim <= 1:
        return None
    basis = hs.block_stack()
    code, complete = kernels.find_split(np.ascontiguousarray(basis), m.p, cap)
    if code < 0:
        if complete:
            return None
        raise CapExceeded("enum_cap", f"End has dimension {hs.dim}")
    e = _stable_power(_code_to_block(basis, int(code), m.p), m.p)
    en = hs.from_block(e)
    ker_b = [el.kernel_basis(c, m.p) for c in en.comps]
    img_b = [el.image_basis(c, m.p) for c in en.comps]
    return subrep(m, ker_b)[0], subrep(m, img_b)[0]


def indecomposable_summands(m: Rep, cap: int = DEFAULT_CAPS.enum_cap) -> List[Rep]:
    """The indecomposable summands (not grouped) in a deterministic order."""
    if m.is_zero():
        return []
    parts = split_once(m, cap)
    if parts is None:
        return [m]
    return indecomposable_summands(parts[0], cap) + indecomposable_summands(parts[1], cap)


def is_indecomposable(m: Rep, caps: Caps = DEFAULT_CAPS) -> Verdict:
    if m.is_zero():
        return Verdict.fails({"reason": "zero representation"})
    try:
        parts = split_once(m, caps.enum_cap)
    except CapExceeded as exc:
        return Verdict.unknown(exc.cap, exc.detail)
    if parts is None:
        return Verdict.holds()
    return Verdict.fails({"summand_dims": [list(parts[0].dims), list(parts[1].dims)]})


def find_isomorphism(m: Rep, n: Rep, cap: int = DEFAULT_CAPS.enum_cap) -> Optional[RepMap]:
    """An isomorphism ``m -> n`` or ``None``; raises CapExceeded if undecided."""
    if m.dims != n.dims:
        return None
    if m == n:
        return RepMap.identity(m)
    hmn = hom_space(m, n)
    if hmn.dim != hom_space(m, m).dim or hmn.dim != hom_space(n, n).dim \
            or hmn.dim != hom_space(n, m).dim:
        return None
    if m.total_dim == 0:
        return RepMap.identity(m)
    basis = hmn.block_stack()
    code, complete = kernels.find_invertible(np.ascontiguousarray(basis), m.p, cap)
    if code < 0:
        if complete:
            return None
        raise CapExceeded("enum_cap", f"Hom has dimension {hmn.dim}")
    return hmn.from_block(_code_to_block(basis, int(code), m.p))


def is_isomorphic(m: Rep, n: Rep, caps: Caps = DEFAULT_CAPS) -> Verdict:
    if m.algebra is not n.algebra:
        raise ValueError("isomorphism test across different algebras")
    if m.dims != n.dims:
        return Verdict.fails({"reason": "dimension vectors differ",
                              "dims": [list(m.dims), list(n.dims)]})
    try:
        iso = find_isomorphism(m, n, caps.enum_cap)
    except CapExceeded as exc:
        # fallback: compare decompositions summand by summand
        try:
            return _iso_by_decomposition(m, n, caps)
        except CapExceeded:
            return Verdict.unknown(exc.cap, exc.detail)
    if iso is None:
        return Verdict.fails({"reason": "no invertible map in Hom(M, N)"})
    return Verdict.holds(evidence={"iso": iso.to_json()})


def _iso_by_decomposition(m: Rep, n: Rep, caps: Caps) -> Verdict:
    dm = group_summands(indecomposable_summands(m, caps.enum_cap), caps.enum_cap)
    dn = group_summands(indecomposable_summands(n, caps.enum_cap), caps.enum_cap)
    if len(dm) != len(dn):
        return Verdict.fails({"reason": "different number of summand classes"})
    used = set()
    for x, k in dm:
        hit = None
        for j, (y, l) in enumerate(dn):
            if j not in used and k == l and find_isomorphism(x, y, caps.enum_cap) is not None:
                hit = j
                break
        if hit is None:
            return Verdict.fails({"reason": "summand multisets differ"})
        used.add(hit)
    return Verdict.holds(detail="by decomposition")


def group_summands(parts: List[Rep], cap: int) -> List[Tuple[Rep, int]]:
    groups: List[List] = []
    for x in parts:
        for g in groups:
            if find_isomorphism(g[0], x, cap) is not None:
                g[1] += 1
                break
        else:
            groups.append([x, 1])
    return [(g[0], g[1]) for g in groups]


def decompose(m: Rep, caps: Caps = DEFAULT_CAPS) -> List[Tuple[Rep, int]]:
    """Direct-sum decomposition ``[(indecomposable, multiplicity), ...]``.

    Raises :class:`CapExceeded` when an idempotent or isomorphism search is
    cut off; callers turn that into an UNKNOWN verdict.
    """
    return group_summands(indecomposable_summands(m, caps.enum_cap), caps.enum_cap)
