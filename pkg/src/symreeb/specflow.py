"""Spectral flow of the boundary-value operators ``v -> -J0 v' - S v``.

The operator acts on paths ``v = (x, y): [0, T] -> R^m x R^m`` with either
real boundary values (``y(0) = y(T) = 0``) or imaginary ones
(``x(0) = x(T) = 0``). It is discretized on a staggered grid: the component
that vanishes at the ends lives on the interior nodes, the other one on the
cell midpoints. The resulting matrix is exactly symmetric, has dimension
``m (2N - 1)`` and, for ``S = 0``, spectrum ``0`` (multiplicity ``m``) and
``+-(2N/T) sin(pi k / 2N)``, ``k = 1..N-1``, each with multiplicity ``m``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy.linalg import eig_banded

from .errors import BorderlineEigenvalueError, DimensionError, LabelAmbiguityError, ResolutionError
from .symplin import HalfInt

REAL = "real"
IMAG = "imaginary"
BOUNDARIES = (REAL, IMAG)

BORDERLINE = 1e-6


@dataclass(frozen=True, eq=False)
class SymmetricMatrixPath:
    """Path ``t -> S(t)`` of symmetric ``2m x 2m`` matrices on ``[0, T]``."""

    S: Callable[[float], np.ndarray]
    T: float
    m: int
    tol: float = 1e-10

    def __call__(self, t: float) -> np.ndarray:
        return np.asarray(self.S(t), dtype=float)

    def evaluate(self, ts) -> np.ndarray:
        out = np.stack([self(t) for t in ts])
        if out.shape[1:] != (2 * self.m, 2 * self.m):
            raise DimensionError(f"S(t) must be {2 * self.m}x{2 * self.m}, got {out.shape[1:]}")
        asym = np.max(np.abs(out - out.transpose(0, 2, 1)))
        if asym > self.tol * max(1.0, np.max(np.abs(out))):
            raise ValueError(f"S(t) is not symmetric (defect {asym:.2e})")
        return (out + out.transpose(0, 2, 1)) / 2

    @classmethod
    def constant(cls, S, T: float = 1.0) -> "SymmetricMatrixPath":
        S = np.asarray(S, dtype=float)
        if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
            raise DimensionError("S must be square of even size")
        return cls(lambda t: S, T, S.shape[0] // 2)

    @classmethod
    def from_samples(cls, ts, Ss) -> "SymmetricMatrixPath":
        """Piecewise-linear interpolation of sampled symmetric matrices."""
        ts = np.asarray(ts, dtype=float)
        Ss = np.asarray(Ss, dtype=float)
        if np.any(np.diff(ts) <= 0):
            raise ValueError("sample times must be increasing")
        if abs(ts[0]) > 0:
            raise ValueError("samples must start at t = 0")

        def S(t):
            i = int(np.clip(np.searchsorted(ts, t, side="right") - 1, 0, len(ts) - 2))
            s = (t - ts[i]) / (ts[i + 1] - ts[i])
            return (1 - s) * Ss[i] + s * Ss[i + 1]

        return cls(S, float(ts[-1]), Ss.shape[1] // 2)

    def scaled(self, s: float) -> "SymmetricMatrixPath":
        f = self.S
        return SymmetricMatrixPath(lambda t: s * np.asarray(f(t)), self.T, self.m, self.tol)


@dataclass(frozen=True, eq=False)
class DiscreteOperator:
    """Banded symmetric matrix in lower storage with its grid metadata.

    Unknowns are interleaved in time: ``a_0, b_1, a_1, b_2, ..., b_{N-1}, a_{N-1}``
    with ``a`` on midpoints and ``b`` on interior nodes, each a block of
    size ``m``.
    """

    band: np.ndarray
    m: int
    N: int
    T: float
    boundary: str

    @property
    def size(self) -> int:
        return self.m * (2 * self.N - 1)

    def dense(self) -> np.ndarray:
        n = self.size
        A = np.zeros((n, n))
        for d in range(self.band.shape[0]):
            idx = np.arange(n - d)
            A[idx + d, idx] = self.band[d, : n - d]
            A[idx, idx + d] = self.band[d, : n - d]
        return A

    def eigenvalues(self) -> np.ndarray:
        return eig_banded(self.band, lower=True, eigvals_only=True, check_finite=False)

    @property
    def zero_label_offset(self) -> int:
        """Number of negative eigenvalues of the unperturbed operator."""
        return self.m * (self.N - 1)


def _check_boundary(boundary):
    if boundary not in BOUNDARIES:
        raise ValueError(f"boundary must be one of {BOUNDARIES}, got {boundary!r}")


def assemble_operator(S: Union[SymmetricMatrixPath, np.ndarray], boundary: str = REAL,
                      N_grid: int = 1024, m: Optional[int] = None) -> DiscreteOperator:
    """Discretize ``v -> -J0 v' - S v`` with the given boundary condition.

    Parameters
    ----------
    S : SymmetricMatrixPath or array
        The path; a constant matrix is accepted with ``T = 1``.
    boundary : {"real", "imaginary"}
        ``"real"`` imposes ``v(0), v(T) in R^m``.
    N_grid : int
        Number of cells, at least 16.
    m : int, optional
        Expected half-dimension; a mismatch raises :class:`DimensionError`.
    """
    if not isinstance(S, SymmetricMatrixPath):
        S = SymmetricMatrixPath.constant(S)
    _check_boundary(boundary)
    if m is not None and m != S.m:
        raise DimensionError(f"path has half-dimension {S.m}, expected {m}")
    N = int(N_grid)
    if N < 16:
        raise ValueError("N_grid must be at least 16")
    m = S.m
    T = S.T
    h = T / N
    mids = (np.arange(N) + 0.5) * h
    nodes = np.arange(1, N) * h
    Smid = S.evaluate(mids)
    Snode = S.evaluate(nodes)
    # a lives on midpoints, b on nodes; for the real boundary a = x, b = y
    if boundary == REAL:
        Saa_mid = Smid[:, :m, :m]
        Sab_mid = Smid[:, :m, m:]
        Sbb_node = Snode[:, m:, m:]
        dsign = 1.0
    else:
        Saa_mid = Smid[:, m:, m:]
        Sab_mid = Smid[:, m:, :m]
        Sbb_node = Snode[:, :m, :m]
        dsign = -1.0

    n = m * (2 * N - 1)
    u = 2 * m - 1
    band = np.zeros((u + 1, n))

    def put(r, c, val):
        # r >= c in the lower triangle
        band[r - c, c] += val

    def a_idx(j):
        return 2 * j * m

    def b_idx(i):
        return (2 * i - 1) * m

    Id = np.eye(m)
    for j in range(N):
        A0 = a_idx(j)
        blk = -Saa_mid[j]
        for r in range(m):
            for c in range(r + 1):
                put(A0 + r, A0 + c, blk[r, c])
        # coupling to b_j (left node) and b_{j+1} (right node):
        # row a_j: dsign*(b_{j+1} - b_j)/h - Sab(mid)(b_j + b_{j+1})/2
        for i, dcoef in ((j, -dsign / h), (j + 1, dsign / h)):
            if i < 1 or i > N - 1:
                continue
            B0 = b_idx(i)
            blk = dcoef * Id - 0.5 * Sab_mid[j]
            # entry (a_j, b_i) = blk; store the lower-triangle copy
            for r in range(m):
                for c in range(m):
                    R, C = A0 + r, B0 + c
                    if R >= C:
                        put(R, C, blk[r, c])
                    else:
                        put(C, R, blk[r, c])
    for i in range(1, N):
        B0 = b_idx(i)
        blk = -Sbb_node[i - 1]
        for r in range(m):
            for c in range(r + 1):
                put(B0 + r, B0 + c, blk[r, c])
    return DiscreteOperator(band=band, m=m, N=N, T=T, boundary=boundary)


@dataclass(frozen=True)
class SpectralLadder:
    """Eigenvalues ``lambda_k`` for ``k`` in ``[k_min, k_max]``."""

    k_min: int
    values: np.ndarray
    boundary: str
    N_grid: int

    @property
    def k_max(self) -> int:
        return self.k_min + len(self.values) - 1

    def __getitem__(self, k: int) -> float:
        if not self.k_min <= k <= self.k_max:
            raise KeyError(f"label {k} outside the ladder window [{self.k_min}, {self.k_max}]")
        return float(self.values[k - self.k_min])

    def labels(self):
        return range(self.k_min, self.k_max + 1)


def _ladder_from(op: DiscreteOperator, ev: np.ndarray, window: float) -> SpectralLadder:
    off = op.zero_label_offset
    sel = np.nonzero(np.abs(ev) <= window)[0]
    if len(sel) == 0:
        lo = hi = int(np.argmin(np.abs(ev)))
    else:
        lo, hi = sel[0], sel[-1]
    # widen by one on each side so the window is bracketed
    lo, hi = max(lo - 1, 0), min(hi + 1, len(ev) - 1)
    return SpectralLadder(k_min=int(lo - off + 1), values=ev[lo:hi + 1].copy(),
                          boundary=op.boundary, N_grid=op.N)


def _sup_norm(S: SymmetricMatrixPath, n: int = 257) -> float:
    ts = np.linspace(0, S.T, n)
    return max(float(np.linalg.norm(M, 2)) for M in S.evaluate(ts))


def label_spectrum(S: SymmetricMatrixPath, boundary: str = REAL, N_grid: int = 1024,
                   homotopy_steps: int = 8, window: Optional[float] = None) -> SpectralLadder:
    """Labelled eigenvalues of the discretized operator.

    Labels are carried along the homotopy ``s S``, ``s in [0, 1]``, starting
    from the anchor where ``lambda_1 = ... = lambda_m = 0``. Consecutive steps
    are matched in sorted order, which is continuous for symmetric families;
    each step is verified against the Weyl bound ``|d lambda_k| <= |dS|``.

    Raises
    ------
    LabelAmbiguityError
        If a labelled eigenvalue moves further than the perturbation allows.
    """
    if not isinstance(S, SymmetricMatrixPath):
        S = SymmetricMatrixPath.constant(S)
    _check_boundary(boundary)
    if window is None:
        window = 4 * np.pi / S.T
    window = max(window, 1.5 * _sup_norm(S) + np.pi / S.T)
    nrm = _sup_norm(S)
    prev = None
    ds = 1.0 / max(1, homotopy_steps)
    ev = None
    op = None
    for step in range(homotopy_steps + 1):
        s = step * ds
        op = assemble_operator(S.scaled(s), boundary, N_grid)
        ev = op.eigenvalues()
        if prev is not None:
            # sorted labels; verify against the perturbation size
            move = np.max(np.abs(ev - prev))
            bound = nrm * ds * (1 + 1e-6) + 1e-9
            if move > bound:
                k = int(np.argmax(np.abs(ev - prev))) - op.zero_label_offset + 1
                raise LabelAmbiguityError(
                    f"label {k} moved {move:.3e} > {bound:.3e} between s={s - ds:.3f} "
                    f"and s={s:.3f}; increase homotopy_steps")
        prev = ev
    return _ladder_from(op, ev, window)


def _labelled(S, boundary, N):
    op = assemble_operator(S, boundary, N)
    ev = op.eigenvalues()
    return ev, op.zero_label_offset


def mu_spectral(S: Union[SymmetricMatrixPath, np.ndarray], boundary: str = REAL,
                N_grid: int = 1024, allow_degenerate: bool = False,
                zero_tol: float = BORDERLINE, check: bool = True) -> HalfInt:
    """Index from the eigenvalue count: ``max{k : lambda_k < 0} - m/2``.

    Eigenvalues near zero are Richardson-extrapolated from grids ``N`` and
    ``N/2`` before their sign is read off; ``check`` also confirms that both
    grids give the same count away from zero.

    Parameters
    ----------
    allow_degenerate : bool
        Treat eigenvalues within ``zero_tol`` of zero as zero (not negative)
        instead of raising; this is the extension of the index to degenerate
        endpoints.

    Raises
    ------
    BorderlineEigenvalueError
        If an eigenvalue lies within ``zero_tol`` of zero and
        ``allow_degenerate`` is false.
    """
    if not isinstance(S, SymmetricMatrixPath):
        S = SymmetricMatrixPath.constant(S)
    _check_boundary(boundary)
    N = int(N_grid)
    ev, off = _labelled(S, boundary, N)
    evc, offc = _labelled(S, boundary, N // 2)
    # labels near zero on both grids; k = index - off + 1
    near = np.nonzero(np.abs(ev) < 0.5)[0]
    kmax_neg = int(np.sum(ev < 0)) - off  # label of the last negative eigenvalue
    for idx in near:
        k = idx - off + 1
        ic = k - 1 + offc
        lam = (4 * ev[idx] - evc[ic]) / 3
        if abs(lam) < zero_tol:
            if not allow_degenerate:
                raise BorderlineEigenvalueError(
                    f"eigenvalue lambda_{k} = {lam:.3e} is within {zero_tol:g} of zero",
                    eigenvalue=float(lam))
            lam = 0.0
        if (lam < 0) != (ev[idx] < 0):
            kmax_neg += 1 if lam < 0 else -1
    if check:
        # compare counts below a cut placed away from eigenvalues of both grids
        cuts = np.linspace(-1.0, -0.25, 61)
        both = np.concatenate([ev[np.abs(ev + 0.6) < 0.6], evc[np.abs(evc + 0.6) < 0.6]])
        gap = np.array([np.min(np.abs(both - c)) if both.size else 1.0 for c in cuts])
        cut = cuts[int(np.argmax(gap))]
        coarse = int(np.sum(evc < cut)) - offc
        fine = int(np.sum(ev < cut)) - off
        if coarse != fine:
            raise ResolutionError(
                f"eigenvalue count differs between grids N={N // 2} and N={N}; refine N_grid")
    return HalfInt(2 * kmax_neg - S.m)
