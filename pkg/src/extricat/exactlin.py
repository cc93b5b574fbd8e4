"""Dense exact linear algebra over a prime field F_p.

Matrices are plain ``numpy.int64`` arrays with entries reduced into
``[0, p)``.  Row reduction always pivots on the leftmost nonzero column and
the first row carrying it, so every echelon form, kernel basis and cokernel
projection below is canonical: identical inputs give identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import kernels

DTYPE = np.int64


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field F_p."""

    p: int = 2

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"field modulus must be prime, got {self.p!r}")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.p - 2, self.p)

    def __str__(self):
        return f"F_{self.p}"


def mat(rows, p: int, shape: Optional[tuple] = None) -> np.ndarray:
    """Coerce nested lists (or an array) into a reduced int64 matrix."""
    a = np.array(rows, dtype=DTYPE)
    if shape is not None:
        a = a.reshape(shape)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return a % p


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=DTYPE)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=DTYPE)


def mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    return (a @ b) % p


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form and the pivot column indices."""
    m = np.ascontiguousarray(m, dtype=DTYPE)
    return kernels.rref(m, p)


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    return int(rref(m, p)[1].shape[0])


def kernel_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right null space, one basis vector per *column*.

    The result has shape ``(cols, cols - rank)``.
    """
    rows, cols = m.shape
    if rows == 0:
        return identity(cols)
    red, piv = rref(m, p)
    r = piv.shape[0]
    free = _non_pivots(cols, piv)
    out = zeros(cols, free.size)
    for j, f in enumerate(free):
        out[f, j] = 1
        out[piv, j] = (-red[:r, f]) % p
    return out


def image_basis(m: np.ndarray, p: int) -> np.ndarray:
    """The pivot columns of ``m``: a basis of its column space."""
    if m.size == 0:
        return zeros(m.shape[0], 0)
    _, piv = rref(m, p)
    return np.ascontiguousarray(m[:, piv] % p)


def _non_pivots(n: int, piv: np.ndarray) -> np.ndarray:
    mask = np.ones(n, dtype=bool)
    mask[piv] = False
    return np.flatnonzero(mask)


def _particular(m: np.ndarray, b: np.ndarray, p: int) -> Optional[np.ndarray]:
    rows, cols = m.shape
    if b.shape[0] != rows:
        raise ValueError(f"rhs has {b.shape[0]} rows, matrix has {rows}")
    aug = np.hstack([m % p, b])
    red, piv = rref(aug, p)
    if np.any(piv >= cols):
        return None
    x = zeros(cols, b.shape[1])
    x[piv, :] = red[:piv.shape[0], cols:]
    return x


def solve_all(m: np.ndarray, b: np.ndarray, p: int):
    """Solve ``m x = b``.

    Returns ``None`` if ``b`` is not in the column space, otherwise
    ``(x, K)`` with ``x`` a particular solution and the columns of ``K`` a
    basis of the solutions of the homogeneous system.
    """
    b = np.asarray(b, dtype=DTYPE) % p
    vector = b.ndim == 1
    if vector:
        b = b.reshape(-1, 1)
    x = _particular(m, b, p)
    if x is None:
        return None
    if vector:
        x = x[:, 0]
    return x, kernel_basis(m % p, p)


def solve(m: np.ndarray, b: np.ndarray, p: int) -> Optional[np.ndarray]:
    """One solution of ``m x = b`` or ``None``."""
    b = np.asarray(b, dtype=DTYPE) % p
    if b.ndim == 1:
        x = _particular(m, b.reshape(-1, 1), p)
        return None if x is None else x[:, 0]
    return _particular(m, b, p)


def _complement_positions(m: np.ndarray, p: int) -> np.ndarray:
    """Indices j such that the standard vectors e_j complement col(m)."""
    rows = m.shape[0]
    if m.size == 0:
        return np.arange(rows)
    _, piv = rref(np.ascontiguousarray(m.T), p)
    return _non_pivots(rows, piv)


class Cokernel(NamedTuple):
    q: np.ndarray        # dim x rows, q m = 0, q surjective
    dim: int
    section: np.ndarray  # rows x dim, q section = I, columns are standard vectors


def cokernel(m: np.ndarray, p: int) -> Cokernel:
    """Canonical cokernel of ``m`` with the pivot-based complement."""
    rows = m.shape[0]
    comp = _complement_positions(m, p)
    d = comp.size
    section = zeros(rows, d)
    section[comp, np.arange(d)] = 1
    if d == rows:
        return Cokernel(identity(rows), d, section)
    img = image_basis(m, p)
    full = np.hstack([img, section])
    inv = inverse(full, p)
    q = np.ascontiguousarray(inv[img.shape[1]:, :])
    return Cokernel(q, d, section)


def cokernel_data(m: np.ndarray, p: int) -> tuple[np.ndarray, int]:
    """``(q, dim coker)``: a projection onto a fixed complement of col(m)."""
    c = cokernel(m, p)
    return c.q, c.dim


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    if n == 0:
        return zeros(0, 0)
    red, piv = rref(np.hstack([m % p, identity(n)]), p)
    if piv.shape[0] < n or piv[n - 1] != n - 1:
        raise ValueError("matrix is singular")
    return np.ascontiguousarray(red[:, n:])


def left_inverse(m: np.ndarray, p: int) -> np.ndarray:
    """``L`` with ``L m = I`` for ``m`` of full column rank."""
    rows, cols = m.shape
    if cols == 0:
        return zeros(0, rows)
    red, piv = rref(np.hstack([m % p, identity(rows)]), p)
    if piv.shape[0] < cols or piv[cols - 1] != cols - 1:
        raise ValueError("matrix is not injective")
    return np.ascontiguousarray(red[:cols, cols:])


def right_inverse(m: np.ndarray, p: int) -> np.ndarray:
    """``R`` with ``m R = I`` for ``m`` of full row rank."""
    return np.ascontiguousarray(left_inverse(np.ascontiguousarray(m.T), p).T)


def is_injective(m: np.ndarray, p: int) -> bool:
    return rank(m, p) == m.shape[1]


def is_surjective(m: np.ndarray, p: int) -> bool:
    return rank(m, p) == m.shape[0]


def block_diag(*blocks: np.ndarray) -> np.ndarray:
    r = sum(b.shape[0] for b in blocks)
    c = sum(b.shape[1] for b in blocks)
    out = zeros(r, c)
    i = j = 0
    for b in blocks:
        out[i:i + b.shape[0], j:j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def enumerate_vectors(k: int, p: int, limit: Optional[int] = None):
    """All vectors of F_p^k in code order (code 0 = zero vector first)."""
    total = p ** k
    if limit is not None:
        total = min(total, limit)
    for code in range(total):
        yield code_to_vector(code, k, p)


def code_to_vector(code: int, k: int, p: int) -> np.ndarray:
    v = np.zeros(k, dtype=DTYPE)
    for i in range(k):
        v[i] = code % p
        code //= p
    return v
