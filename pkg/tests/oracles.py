"""Closed forms and brute-force computations used as independent references.

Nothing here imports from ``symreeb``.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

SQRT2 = math.sqrt(2.0)


def signature(A, tol=1e-10) -> int:
    w = np.linalg.eigvalsh((np.asarray(A) + np.asarray(A).T) / 2)
    s = tol * max(1.0, float(np.max(np.abs(w))) if w.size else 1.0)
    return int(np.sum(w > s) - np.sum(w < -s))


def graph_path_index(A0, A1, B) -> Fraction:
    """Index of ``t -> gr(A0 + t (A1 - A0))`` relative to ``gr(B)``.

    Graphs over the horizontal form a contractible chart; the index only
    depends on the endpoints: ``(sgn(A1 - B) - sgn(A0 - B)) / 2``.
    """
    return Fraction(signature(np.subtract(A1, B)) - signature(np.subtract(A0, B)), 2)


def rotation_cz(theta: float) -> int:
    """Conley-Zehnder index of ``t -> exp(t theta J)`` on ``[0, 1]`` in one plane, theta >= 0.

    Crossings sit at ``theta t in 2 pi Z`` with signature 2.
    """
    if theta == 0:
        return 0
    w = theta / (2 * math.pi)
    k = math.floor(w)
    if abs(w - round(w)) < 1e-12:
        return 2 * round(w)
    return 2 * k + 1


def rotation_rs_horizontal(theta: float) -> Fraction:
    """Index of ``t -> R(theta t) L0`` relative to ``L0``, one plane, theta >= 0.

    Crossings at ``theta t in pi Z`` with signature +1, endpoints weighted 1/2.
    """
    if theta == 0:
        return Fraction(0)
    w = theta / math.pi
    if abs(w - round(w)) < 1e-12:
        return Fraction(2 * round(w), 2)  # 1/2 + (w - 1) + 1/2
    return Fraction(1, 2) + math.floor(w)


def ellipsoid_mu(axis_ratio_inv: float, ell: int) -> Fraction:
    """``ell + 1/2 + floor(ell * r)`` for the transverse rotation ratio ``r``."""
    return Fraction(2 * ell + 1, 2) + math.floor(ell * axis_ratio_inv + 1e-12)


def ellipsoid_tables(ell_max: int):
    """Twice the closed-form indices of the two axis chords of E(1, sqrt 2)."""
    c1 = [int(2 * ellipsoid_mu(1 / SQRT2, ell)) for ell in range(1, ell_max + 1)]
    c2 = [int(2 * ellipsoid_mu(SQRT2, ell)) for ell in range(1, ell_max + 1)]
    return c1, c2


def jump_vectors(tables, minus, m_max):
    """Brute-force common jumps on twice-index tables.

    For each chord the candidate ``K`` satisfies
    ``2K = t[2m-1] + minus`` and ``2K = t[2m+1] - t[1]`` (both doubled).
    """
    per = []
    for t, mm in zip(tables, minus):
        cand = {}
        for m in range(1, m_max + 1):
            a = t[2 * m - 2] + mm
            b = t[2 * m] - t[0]
            if a == b and a % 2 == 0:
                cand[a // 2] = m
        per.append(cand)
    common = set(per[0]).intersection(*per[1:])
    return [(K, tuple(p[K] for p in per)) for K in sorted(common) if K >= 1]


def f2_rank(M) -> int:
    """Rank over F_2 by an XOR basis on Python integer bitmasks."""
    M = np.asarray(M) % 2
    basis = {}
    for row in M:
        v = int("".join(str(int(x)) for x in row) or "0", 2)
        while v:
            h = v.bit_length() - 1
            if h in basis:
                v ^= basis[h]
            else:
                basis[h] = v
                break
    return len(basis)


def f2_betti(dims, boundary):
    """Betti numbers from ranks: ``dim C_q - rank d_q - rank d_{q+1}``."""
    def rk(q):
        M = boundary.get(q)
        return 0 if M is None or np.size(M) == 0 else f2_rank(M)

    return {q: dims[q] - rk(q) - rk(q + 1) for q in dims}


def equivariant_betti(dims, boundary, phi1, N):
    """Betti numbers of ``F_2[w]/(w^{N+1}) (x) C`` with ``D = d + w^{-1} phi_1``.

    Built degree by degree from scratch: the degree-``k`` chains are the
    pairs ``(l, q)`` with ``l + q = k``; ``D`` sends ``w^l x`` to
    ``w^l d x + w^{l-1} phi_1 x``.
    """
    def block(k):
        return [(l, k - l) for l in range(N + 1) if dims.get(k - l, 0)]

    def matrix(k):
        src, dst = block(k), block(k - 1)
        so, do = {}, {}
        c = 0
        for key in src:
            so[key] = c
            c += dims[key[1]]
        r = 0
        for key in dst:
            do[key] = r
            r += dims[key[1]]
        M = np.zeros((r, c), dtype=np.uint8)
        for (l, q) in src:
            d = boundary.get(q)
            if d is not None and (l, q - 1) in do:
                M[do[(l, q - 1)]:do[(l, q - 1)] + dims[q - 1], so[(l, q)]:so[(l, q)] + dims[q]] ^= \
                    np.asarray(d, dtype=np.uint8) % 2
            p = phi1.get(q)
            if p is not None and l >= 1 and (l - 1, q) in do:
                M[do[(l - 1, q)]:do[(l - 1, q)] + dims[q], so[(l, q)]:so[(l, q)] + dims[q]] ^= \
                    np.asarray(p, dtype=np.uint8) % 2
        return M

    degs = range(min(dims), max(dims) + N + 1)
    size = {k: sum(dims[q] for _, q in block(k)) for k in degs}
    rk = {k: (f2_rank(matrix(k)) if size[k] and size.get(k - 1, 0) else 0) for k in degs}
    return {k: size[k] - rk[k] - rk.get(k + 1, 0) for k in degs if size[k] - rk[k] - rk.get(k + 1, 0)}
