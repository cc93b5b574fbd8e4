"""Hot loops over a prime field.

Every kernel exists twice: a loop form compiled with numba (``*_loop``) and a
vectorised numpy form (``*_vec``).  The public names at the bottom of the
module bind to one or the other according to :mod:`extricat._accel`.  Both
forms follow the same pivot rule and the same enumeration order, so their
outputs are identical.
"""

from __future__ import annotations

import numpy as np

from ._accel import USE_NUMBA, njit

# ---------------------------------------------------------------------------
# loop kernels (numba)
# ---------------------------------------------------------------------------


@njit
def _inv_mod(a, p):
    result = 1
    base = a % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


@njit
def rref_loop(a, p):
    """Reduced row echelon form; pivot = leftmost nonzero column, first row."""
    m = a.copy()
    rows, cols = m.shape
    for i in range(rows):
        for j in range(cols):
            m[i, j] = m[i, j] % p
    piv = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        sel = -1
        for i in range(r, rows):
            if m[i, c] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != r:
            for j in range(cols):
                t = m[r, j]
                m[r, j] = m[sel, j]
                m[sel, j] = t
        inv = _inv_mod(m[r, c], p)
        if inv != 1:
            for j in range(cols):
                m[r, j] = m[r, j] * inv % p
        for i in range(rows):
            if i != r and m[i, c] != 0:
                f = m[i, c]
                for j in range(cols):
                    m[i, j] = (m[i, j] - f * m[r, j]) % p
        piv[r] = c
        r += 1
    return m, piv[:r].copy()


@njit
def _rank_loop(a, p):
    _, piv = rref_loop(a, p)
    return piv.shape[0]


@njit
def _matmul_loop(a, b, p):
    n, k = a.shape
    m = b.shape[1]
    out = np.zeros((n, m), dtype=np.int64)
    for i in range(n):
        for t in range(k):
            x = a[i, t]
            if x != 0:
                for j in range(m):
                    out[i, j] += x * b[t, j]
    for i in range(n):
        for j in range(m):
            out[i, j] %= p
    return out


@njit
def _fitting_rank_loop(e, p):
    """Rank of e^(2^s) with 2^s >= n, i.e. the stable rank of powers of e."""
    n = e.shape[0]
    x = e.copy()
    s = 1
    while s < n:
        x = _matmul_loop(x, x, p)
        s *= 2
    return _rank_loop(x, p)


@njit
def _combine_loop(basis, code, p):
    k, n, m = basis.shape
    out = np.zeros((n, m), dtype=np.int64)
    c = code
    for i in range(k):
        d = c % p
        c //= p
        if d != 0:
            for r in range(n):
                for s in range(m):
                    out[r, s] += d * basis[i, r, s]
    for r in range(n):
        for s in range(m):
            out[r, s] %= p
    return out


@njit
def _unit_code(i, p):
    c = 1
    for _ in range(i):
        c *= p
    return c


@njit
def find_split_loop(basis, p, cap):
    """Search End(M) (given by a basis of square matrices) for an element whose
    stable power is neither zero nor invertible.

    Returns ``(code, complete)``.  ``code >= 0`` is the base-p coefficient code
    of a splitting element.  ``code == -1`` with ``complete`` true means every
    element was tried; with ``complete`` false the cap stopped the search.
    """
    k = basis.shape[0]
    n = basis.shape[1]
    if n == 0:
        return -1, True
    for i in range(k):
        r = _fitting_rank_loop(basis[i], p)
        if 0 < r < n:
            return _unit_code(i, p), True
    total = 1
    for _ in range(k):
        total *= p
        if total > cap:
            return -1, False
    for code in range(1, total):
        e = _combine_loop(basis, code, p)
        r = _fitting_rank_loop(e, p)
        if 0 < r < n:
            return code, True
    return -1, True


@njit
def find_invertible_loop(basis, p, cap):
    """First element of span(basis) of full rank, same return convention."""
    k = basis.shape[0]
    n = basis.shape[1]
    if n == 0:
        return 0, True
    for i in range(k):
        if _rank_loop(basis[i], p) == n:
            return _unit_code(i, p), True
    total = 1
    for _ in range(k):
        total *= p
        if total > cap:
            return -1, False
    for code in range(1, total):
        e = _combine_loop(basis, code, p)
        if _rank_loop(e, p) == n:
            return code, True
    return -1, True


@njit
def _eval_path_loop(ent, off, dims, src, tgt, path, plen, p):
    first = path[0]
    ds = dims[src[first]]
    cur = np.zeros((dims[tgt[first]], ds), dtype=np.int64)
    o = off[first]
    for r in range(cur.shape[0]):
        for c in range(ds):
            cur[r, c] = ent[o + r * ds + c]
    for t in range(1, plen):
        a = path[t]
        da_s = dims[src[a]]
        da_t = dims[tgt[a]]
        mat = np.zeros((da_t, da_s), dtype=np.int64)
        o = off[a]
        for r in range(da_t):
            for c in range(da_s):
                mat[r, c] = ent[o + r * da_s + c]
        cur = _matmul_loop(mat, cur, p)
    return cur


@njit
def scan_reps_loop(p, dims, src, tgt, rel_ptr, term_coef, term_ptr, term_arrows,
                   code_lo, code_hi, cap):
    """Classify every arrow-matrix tuple with the given dimension vector.

    Codes enumerate the entries of all arrow matrices (row-major, arrows in
    order, base p, least significant digit first).  Status per code:
    -1 violates a relation, 0 decomposable (certified by a Fitting split),
    1 indecomposable (End has no splitting element), 2 undecided (cap).
    """
    nv = dims.shape[0]
    na = src.shape[0]
    off = np.zeros(na + 1, dtype=np.int64)
    for a in range(na):
        off[a + 1] = off[a] + dims[tgt[a]] * dims[src[a]]
    nent = off[na]
    voff = np.zeros(nv + 1, dtype=np.int64)
    eoff = np.zeros(nv + 1, dtype=np.int64)
    for v in range(nv):
        voff[v + 1] = voff[v] + dims[v]
        eoff[v + 1] = eoff[v] + dims[v] * dims[v]
    ntot = voff[nv]
    nunk = eoff[nv]
    ncount = code_hi - code_lo
    status = np.empty(ncount, dtype=np.int8)
    enddim = np.zeros(ncount, dtype=np.int64)
    ent = np.zeros(nent, dtype=np.int64)
    nrel = rel_ptr.shape[0] - 1
    for idx in range(ncount):
        code = code_lo + idx
        c = code
        for i in range(nent):
            ent[i] = c % p
            c //= p
        ok = True
        for r in range(nrel):
            t0 = rel_ptr[r]
            a0 = term_arrows[term_ptr[t0]]
            alast = term_arrows[term_ptr[t0 + 1] - 1]
            acc = np.zeros((dims[tgt[alast]], dims[src[a0]]), dtype=np.int64)
            for t in range(rel_ptr[r], rel_ptr[r + 1]):
                plen = term_ptr[t + 1] - term_ptr[t]
                pm = _eval_path_loop(ent, off, dims, src, tgt,
                                     term_arrows[term_ptr[t]:term_ptr[t + 1]], plen, p)
                for i in range(acc.shape[0]):
                    for j in range(acc.shape[1]):
                        acc[i, j] = (acc[i, j] + term_coef[t] * pm[i, j]) % p
            for i in range(acc.shape[0]):
                for j in range(acc.shape[1]):
                    if acc[i, j] != 0:
                        ok = False
            if not ok:
                break
        if not ok:
            status[idx] = -1
            continue
        # commuting-square constraints F_y M_a - M_a F_x = 0
        cons = np.zeros((nent, nunk), dtype=np.int64)
        for a in range(na):
            x = src[a]
            y = tgt[a]
            dx = dims[x]
            dy = dims[y]
            for i in range(dy):
                for j in range(dx):
                    row = off[a] + i * dx + j
                    for k in range(dy):
                        cons[row, eoff[y] + i * dy + k] += ent[off[a] + k * dx + j]
                    for k in range(dx):
                        cons[row, eoff[x] + k * dx + j] -= ent[off[a] + i * dx + k]
        red, piv = rref_loop(cons, p)
        rk = piv.shape[0]
        kdim = nunk - rk
        enddim[idx] = kdim
        if kdim <= 1:
            status[idx] = 1
            continue
        ispiv = np.zeros(nunk, dtype=np.bool_)
        for i in range(rk):
            ispiv[piv[i]] = True
        basis = np.zeros((kdim, ntot, ntot), dtype=np.int64)
        b = 0
        for fcol in range(nunk):
            if ispiv[fcol]:
                continue
            vec = np.zeros(nunk, dtype=np.int64)
            vec[fcol] = 1
            for i in range(rk):
                vec[piv[i]] = (p - red[i, fcol]) % p
            for v in range(nv):
                dv = dims[v]
                for i in range(dv):
                    for j in range(dv):
                        basis[b, voff[v] + i, voff[v] + j] = vec[eoff[v] + i * dv + j]
            b += 1
        code_s, complete = find_split_loop(basis, p, cap)
        if code_s >= 0:
            status[idx] = 0
        elif complete:
            status[idx] = 1
        else:
            status[idx] = 2
    return status, enddim


# ---------------------------------------------------------------------------
# vectorised kernels (numpy)
# ---------------------------------------------------------------------------


def rref_vec(a, p):
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        sel = r + int(nz[0])
        if sel != r:
            m[[r, sel]] = m[[sel, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        if inv != 1:
            m[r] = m[r] * inv % p
        col = m[:, c].copy()
        col[r] = 0
        if col.any():
            m = (m - np.outer(col, m[r])) % p
        pivots.append(c)
        r += 1
    return m, np.array(pivots, dtype=np.int64)


def _rank_vec(a, p):
    return rref_vec(a, p)[1].shape[0]


def _fitting_rank_vec(e, p):
    n = e.shape[0]
    x = e % p
    s = 1
    while s < n:
        x = (x @ x) % p
        s *= 2
    return _rank_vec(x, p)


def _codes(k, p, lo, hi):
    """Base-p digit rows (least significant first) for codes lo..hi-1."""
    codes = np.arange(lo, hi, dtype=np.int64)
    digits = np.empty((codes.size, k), dtype=np.int64)
    c = codes.copy()
    for i in range(k):
        digits[:, i] = c % p
        c //= p
    return digits


def _search_vec(basis, p, cap, accept):
    k = basis.shape[0]
    for i in range(k):
        if accept(basis[i] % p):
            return p ** i, True
    if k == 0 or p ** k > cap:
        return -1, p ** k <= cap
    # chunk the enumeration so memory stays bounded
    total = p ** k
    step = 4096
    for lo in range(1, total, step):
        hi = min(total, lo + step)
        digits = _codes(k, p, lo, hi)
        elems = np.tensordot(digits, basis, axes=(1, 0)) % p
        for j in range(elems.shape[0]):
            if accept(elems[j]):
                return lo + j, True
    return -1, True


def find_split_vec(basis, p, cap):
    basis = np.asarray(basis, dtype=np.int64)
    n = basis.shape[1]
    if n == 0:
        return -1, True
    return _search_vec(basis, p, cap, lambda e: 0 < _fitting_rank_vec(e, p) < n)


def find_invertible_vec(basis, p, cap):
    basis = np.asarray(basis, dtype=np.int64)
    n = basis.shape[1]
    if n == 0:
        return 0, True
    return _search_vec(basis, p, cap, lambda e: _rank_vec(e, p) == n)


def scan_reps_vec(p, dims, src, tgt, rel_ptr, term_coef, term_ptr, term_arrows,
                  code_lo, code_hi, cap):
    dims = np.asarray(dims, dtype=np.int64)
    na = len(src)
    sizes = [int(dims[tgt[a]] * dims[src[a]]) for a in range(na)]
    off = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
    nent = int(off[-1])
    digits = _codes(nent, p, code_lo, code_hi)
    n = digits.shape[0]
    mats = [digits[:, off[a]:off[a + 1]].reshape(n, dims[tgt[a]], dims[src[a]])
            for a in range(na)]
    valid = np.ones(n, dtype=bool)
    for r in range(len(rel_ptr) - 1):
        acc = None
        for t in range(rel_ptr[r], rel_ptr[r + 1]):
            path = term_arrows[term_ptr[t]:term_ptr[t + 1]]
            cur = mats[path[0]]
            for a in path[1:]:
                cur = np.matmul(mats[a], cur) % p
            term = term_coef[t] * cur
            acc = term if acc is None else acc + term
        valid &= ~((acc % p).reshape(n, int(np.prod(acc.shape[1:]))).any(axis=1))
    status = np.full(n, -1, dtype=np.int8)
    enddim = np.zeros(n, dtype=np.int64)
    nv = len(dims)
    voff = np.concatenate([[0], np.cumsum(dims)]).astype(np.int64)
    esz = dims * dims
    eoff = np.concatenate([[0], np.cumsum(esz)]).astype(np.int64)
    ntot, nunk = int(voff[-1]), int(eoff[-1])
    for idx in np.flatnonzero(valid):
        blocks = []
        for a in range(na):
            x, y = src[a], tgt[a]
            m = mats[a][idx]
            left = np.zeros((sizes[a], nunk), dtype=np.int64)
            left[:, eoff[y]:eoff[y + 1]] = np.kron(np.eye(dims[y], dtype=np.int64), m.T)
            left[:, eoff[x]:eoff[x + 1]] -= np.kron(m, np.eye(dims[x], dtype=np.int64))
            blocks.append(left)
        cons = np.vstack(blocks) if blocks else np.zeros((0, nunk), dtype=np.int64)
        red, piv = rref_vec(cons, p)
        rk = piv.shape[0]
        kdim = nunk - rk
        enddim[idx] = kdim
        if kdim <= 1:
            status[idx] = 1
            continue
        free = np.setdiff1d(np.arange(nunk), piv)
        basis = np.zeros((kdim, ntot, ntot), dtype=np.int64)
        for b, fcol in enumerate(free):
            vec = np.zeros(nunk, dtype=np.int64)
            vec[fcol] = 1
            vec[piv] = (-red[:rk, fcol]) % p
            for v in range(nv):
                dv = dims[v]
                basis[b, voff[v]:voff[v + 1], voff[v]:voff[v + 1]] = \
                    vec[eoff[v]:eoff[v + 1]].reshape(dv, dv)
        code_s, complete = find_split_vec(basis, p, cap)
        status[idx] = 0 if code_s >= 0 else (1 if complete else 2)
    return status, enddim


if USE_NUMBA:
    rref = rref_loop
    find_split = find_split_loop
    find_invertible = find_invertible_loop
    scan_reps = scan_reps_loop
else:
    rref = rref_vec
    find_split = find_split_vec
    find_invertible = find_invertible_vec
    scan_reps = scan_reps_vec
