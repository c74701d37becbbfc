"""Dense linear algebra over F_2 on bit-packed rows."""

from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np

from ..errors import DimensionError

MAX_DIM = 10_000


def to_f2(A) -> np.ndarray:
    """Reduce an integer array mod 2 to a ``uint8`` 0/1 matrix."""
    a = np.asarray(A)
    if a.dtype == np.uint8 and (a.size == 0 or a.max() <= 1):
        return a
    if a.dtype.kind == "f":
        if not np.all(np.isfinite(a)) or not np.all(a == np.round(a)):
            raise ValueError("F_2 matrices must have integer entries")
        a = a.astype(np.int64)
    elif a.dtype.kind == "b":
        a = a.astype(np.int64)
    elif a.dtype.kind not in "iu":
        raise ValueError(f"cannot interpret dtype {a.dtype} over F_2")
    return (a & 1).astype(np.uint8)


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.uint8)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.uint8)


def matmul(A, B) -> np.ndarray:
    A, B = to_f2(A), to_f2(B)
    if A.shape[1] != B.shape[0]:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    if A.size == 0 or B.size == 0:
        return zeros(A.shape[0], B.shape[1])
    return ((A.astype(np.int32) @ B.astype(np.int32)) & 1).astype(np.uint8)


def _check_size(A: np.ndarray) -> None:
    if max(A.shape, default=0) > MAX_DIM:
        raise DimensionError(f"F_2 matrix of shape {A.shape} exceeds the {MAX_DIM} limit")


def rref(A) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form and pivot columns.

    Rows are packed eight bits per byte so each elimination step is one
    vectorised XOR over the affected rows.
    """
    A = to_f2(A)
    _check_size(A)
    r, c = A.shape
    if r == 0 or c == 0:
        return A.copy(), []
    P = np.packbits(A, axis=1)
    pivots = []
    row = 0
    for j in range(c):
        if row == r:
            break
        byte, bit = j >> 3, 7 - (j & 7)
        col = (P[row:, byte] >> bit) & 1
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        piv = row + nz[0]
        if piv != row:
            P[[row, piv]] = P[[piv, row]]
        hit = np.flatnonzero((P[:, byte] >> bit) & 1)
        hit = hit[hit != row]
        if hit.size:
            P[hit] ^= P[row]
        pivots.append(j)
        row += 1
    R = np.unpackbits(P, axis=1, count=c).astype(np.uint8)
    return R, pivots


def rank(A) -> int:
    A = to_f2(A)
    if A.size == 0:
        return 0
    return len(rref(A)[1])


def nullspace(A) -> np.ndarray:
    """Basis of ``{x : A x = 0}`` as columns."""
    A = to_f2(A)
    r, c = A.shape
    if r == 0:
        return eye(c)
    R, piv = rref(A)
    free = [j for j in range(c) if j not in set(piv)]
    N = zeros(c, len(free))
    for k, f in enumerate(free):
        N[f, k] = 1
        for i, p in enumerate(piv):
            N[p, k] = R[i, f]
    return N


def solve(A, b) -> Optional[np.ndarray]:
    """One solution of ``A x = b`` (``b`` may have several columns), or None."""
    A, b = to_f2(A), to_f2(b)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    r, c = A.shape
    if c == 0:
        if b.any():
            return None
        x = zeros(0, b.shape[1])
        return x[:, 0] if vec else x
    R, piv = rref(np.hstack([A, b]))
    if any(p >= c for p in piv):
        return None
    x = zeros(c, b.shape[1])
    for i, p in enumerate(piv):
        x[p] = R[i, c:]
    return x[:, 0] if vec else x


def independent_extension(span: np.ndarray, vectors: np.ndarray) -> List[int]:
    """Indices of columns of ``vectors`` that extend ``span`` to a basis of the sum."""
    n = span.shape[0] if span.size else vectors.shape[0]
    span = span if span.size else zeros(n, 0)
    k = span.shape[1]
    if vectors.shape[1] == 0:
        return []
    _, piv = rref(np.hstack([span, vectors]))
    return [p - k for p in piv if p >= k]


def column_basis(A: np.ndarray) -> np.ndarray:
    """Independent columns of ``A`` spanning its column space."""
    A = to_f2(A)
    if A.shape[1] == 0:
        return A
    _, piv = rref(A)
    return A[:, piv]
