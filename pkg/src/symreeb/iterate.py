"""Iterates of symmetric chords and their indices.

A chord path ``Phi`` on ``[0, T]`` extends to ``[0, l T]`` by alternating the
path itself with its reflection: with ``Phi(2T) = I Phi(T)^{-1} I Phi(T)``,

* on ``[2jT, (2j+1)T]``:  ``Phi(t - 2jT) Phi(2T)^j``  (generator ``S``),
* on ``[(2j-1)T, 2jT]``:  ``I Phi(2jT - t) I Phi(2T)^j``  (generator ``I S I``).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import (
    AssemblyError,
    DegenerateCrossingError,
    FormError,
    SymreebError,
)
from .maslov import LagrangianPath, rs_index, rs_index_graph
from .specflow import IMAG, REAL, SymmetricMatrixPath, mu_spectral
from .symplin import (
    HalfInt,
    J0,
    LagrangianFrame,
    SymplecticPath,
    anti_involution,
    block_decompose,
    symplectic_inverse,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ChordPath:
    """Linearized flow along a chord, ``Phi(0) = Id``.

    Parameters
    ----------
    Phi : SymplecticPath
        The path on ``[0, T]``.
    eta_dim : int
        Number of directions that always lie in ``Phi(T) L0 ∩ L0`` (and
        ``Phi(T) L1 ∩ L1``) for structural reasons; 1 for the ambient
        linearization of a chord on a hypersurface, 0 otherwise.
    reduced : ChordPath, optional
        Transverse part used for the degenerate (spectral) index.
    """

    Phi: SymplecticPath
    eta_dim: int = 0
    reduced: Optional["ChordPath"] = None
    label: str = "c"

    def __post_init__(self):
        P0 = self.Phi(0.0)
        if np.max(np.abs(P0 - np.eye(2 * self.m))) > 1e-12:
            raise AssemblyError("chord path must start at the identity")

    @property
    def m(self) -> int:
        return self.Phi.m

    @property
    def T(self) -> float:
        return self.Phi.T

    @property
    def I_matrix(self) -> np.ndarray:
        return anti_involution(self.m)

    @classmethod
    def from_generator(cls, S, T: float, m: Optional[int] = None, **kw) -> "ChordPath":
        if callable(S):
            return cls(SymplecticPath.from_generator(S, T, m), **kw)
        return cls(SymplecticPath.constant_generator(S, T), **kw)


# --------------------------------------------------------------------------
# doubled matrix and Chebyshev powers


def doubled_matrix(PhiT) -> np.ndarray:
    """``Phi(2T) = I Phi(T)^{-1} I Phi(T)``."""
    PhiT = np.asarray(PhiT, dtype=float)
    I = anti_involution(PhiT.shape[0] // 2)
    return I @ symplectic_inverse(PhiT, tol=1e-8) @ I @ PhiT


def doubled_blocks(PhiT):
    """Blocks ``A, B, C`` of the doubled matrix from those of ``Phi(T)``.

    ``A = W^T X + Y^T Z``, ``B = W^T Y + Y^T W``, ``C = 2 X^T Z``.
    """
    X, Y, Z, W = block_decompose(PhiT)
    return W.T @ X + Y.T @ Z, W.T @ Y + Y.T @ W, 2 * X.T @ Z


def chebyshev_polys(A, k: int):
    """``T_k(A)`` and ``U_{k-1}(A)`` by the three-term recurrence.

    Uses ``T_0 = I, T_1 = A, U_0 = I, U_1 = 2A``.
    """
    A = np.asarray(A, dtype=float)
    if k < 1:
        raise ValueError("k must be positive")
    I = np.eye(A.shape[0])
    Tp, Tc = I, A
    Up, Uc = I, 2 * A  # U_0, U_1
    for _ in range(1, k):
        Tp, Tc = Tc, 2 * A @ Tc - Tp
    if k == 1:
        return Tc, I
    for _ in range(1, k - 1):
        Up, Uc = Uc, 2 * A @ Uc - Up
    return Tc, Uc


def check_doubled_form(M, tol: float = 1e-8):
    """Return ``A, B, C`` if ``M = [[A, B], [C, A^T]]`` with ``B, C`` symmetric."""
    A, B, C, D = block_decompose(M)
    scale = max(1.0, float(np.max(np.abs(M))))
    defects = {
        "D - A^T": np.max(np.abs(D - A.T)),
        "B - B^T": np.max(np.abs(B - B.T)),
        "C - C^T": np.max(np.abs(C - C.T)),
    }
    for name, d in defects.items():
        if d > tol * scale:
            raise FormError(f"matrix is not of doubled form: |{name}| = {d:.2e}")
    return A, B, C


def chebyshev_power(M, k: int, tol: float = 1e-8) -> np.ndarray:
    """``M^k`` for ``M = [[A, B], [C, A^T]]`` via Chebyshev polynomials.

    ``M^k = [[T_k(A), U_{k-1}(A) B], [C U_{k-1}(A), T_k(A^T)]]``.

    Raises
    ------
    FormError
        If the block symmetry fails.
    """
    A, B, C = check_doubled_form(M, tol)
    Tk, Uk1 = chebyshev_polys(A, k)
    return np.block([[Tk, Uk1 @ B], [C @ Uk1, Tk.T]])


# --------------------------------------------------------------------------
# iteration


def iterate_chord(c: ChordPath, ell: int, tol: float = 1e-8) -> SymplecticPath:
    """The ``ell``-th iterate as a path on ``[0, ell T]``.

    Raises
    ------
    AssemblyError
        If consecutive segments do not meet within ``tol`` (relative).
    """
    if ell < 1:
        raise ValueError("iteration order must be positive")
    T = c.T
    I = c.I_matrix
    base = c.Phi
    P2 = doubled_matrix(base(T))
    powers = [np.eye(2 * c.m)]
    for _ in range((ell + 1) // 2):
        powers.append(powers[-1] @ P2)

    def locate(t):
        return int(np.clip(np.floor(t / T), 0, ell - 1))

    def seg(i, t):
        j = (i + 1) // 2
        if i % 2 == 0:
            return base(t - i * T) @ powers[j]
        return I @ base(2 * j * T - t) @ I @ powers[j]

    def phi(t):
        return seg(locate(t), t)

    gen = None
    if base.generator is not None:
        g = base.generator

        def gen(t):
            i = locate(t)
            j = (i + 1) // 2
            if i % 2 == 0:
                return g(t - i * T)
            return I @ g(2 * j * T - t) @ I

    # junction continuity
    for i in range(1, ell):
        t = i * T
        left, right = seg(i - 1, t), seg(i, t)
        err = np.max(np.abs(left - right)) / max(1.0, np.max(np.abs(right)))
        if err > tol:
            raise AssemblyError(f"iterate segments disagree at t={t:g} (rel. error {err:.2e})")
    return SymplecticPath(phi, ell * T, c.m, generator=gen, i_invariant=base.i_invariant)


def _orth(F):
    Q, _ = np.linalg.qr(F)
    return Q


def segment_indices(c: ChordPath, ell: int, L, **kw) -> List[HalfInt]:
    """Index of each segment of the ``ell``-th iterate relative to ``L``.

    ``L`` must be ``I``-invariant (``L0`` or ``L1``). Summing the first ``l``
    entries gives the index of the ``l``-th iterate (catenation). On a
    reflected segment the time reversal and the anti-symplectic conjugation
    cancel, so every segment is the base path applied to a moving frame.
    """
    L = LagrangianFrame(np.asarray(L.F if isinstance(L, LagrangianFrame) else L))
    I = c.I_matrix
    P2 = doubled_matrix(c.Phi(c.T))
    G = L.F.copy()  # orthonormal frame of Phi(2T)^j L
    out = []
    for i in range(ell):
        if i % 2 == 0:
            start = G
        else:
            # G holds Phi(2T)^{j-1} L; advance once
            G = _orth(P2 @ G)
            start = _orth(I @ G)
        path = LagrangianPath.from_symplectic(c.Phi, start)
        out.append(rs_index(path, L, **kw))
    return out


@dataclass
class IterationReport:
    ell: int
    mu_I: HalfInt
    mu_minus_I: HalfInt
    mu_CZ_even: Optional[HalfInt]
    nondeg_L0: bool
    nondeg_L1: bool
    route: str = "crossing"
    cz_consistent: Optional[bool] = None
    mean_index_estimate: Optional[float] = None
    mean_index_bound: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "ell": self.ell,
            "mu_I": str(self.mu_I),
            "mu_minus_I": str(self.mu_minus_I),
            "mu_CZ_even": None if self.mu_CZ_even is None else str(self.mu_CZ_even),
            "nondeg_L0": self.nondeg_L0,
            "nondeg_L1": self.nondeg_L1,
            "route": self.route,
            "cz_consistent": self.cz_consistent,
            "mean_index_estimate": self.mean_index_estimate,
            "mean_index_bound": self.mean_index_bound,
        }


def nondegeneracy(c: ChordPath, ell: int = 1, tol: float = 1e-7):
    """L0- and L1-non-degeneracy of the ``ell``-th iterate.

    The intersection ``Phi(lT) L ∩ L`` must have dimension exactly
    ``c.eta_dim``. For a reduced path this is invertibility of the blocks
    ``Z`` and ``Y`` of the endpoint.
    """
    P = iterate_chord(c, ell).endpoint()
    out = []
    for L in (LagrangianFrame.horizontal(c.m), LagrangianFrame.vertical(c.m)):
        F = _orth(P @ L.F)
        s = np.linalg.svd(L.F.T @ J0(c.m) @ F, compute_uv=False)
        out.append(int(np.sum(s <= tol)) == c.eta_dim)
    return tuple(out)


def iterate_generator_path(c: ChordPath, ell: int) -> SymmetricMatrixPath:
    it = iterate_chord(c, ell)
    if it.generator is None:
        raise SymreebError("the spectral route needs a generator")
    return SymmetricMatrixPath(it.generator, it.T, c.m)


def _spectral_pair(c: ChordPath, ell: int, N_grid: int):
    target = c.reduced if c.eta_dim else c
    if target is None:
        raise SymreebError(f"chord {c.label}: degenerate and no reduced path for the spectral route")
    S = iterate_generator_path(target, ell)
    return (mu_spectral(S, REAL, N_grid=N_grid, allow_degenerate=True),
            mu_spectral(S, IMAG, N_grid=N_grid, allow_degenerate=True))


def mu_indices(c: ChordPath, ell: int = 1, *, check_cz: bool = True, N_grid: int = 1024,
               **kw) -> IterationReport:
    """``mu_I``, ``mu_{-I}`` of the ``ell``-th iterate, with non-degeneracy flags.

    Degenerate iterates, and iterates whose crossings are not regular, use
    the spectral definition. For even ``ell`` the Conley-Zehnder index of the
    iterate is computed from its graph and compared with
    ``mu_I + mu_{-I}`` of the ``ell/2``-th iterate.
    """
    nd0, nd1 = nondegeneracy(c, ell)
    route = "crossing"
    if nd0 and nd1:
        try:
            mu0 = sum(segment_indices(c, ell, LagrangianFrame.horizontal(c.m), **kw), HalfInt(0))
            mu1 = sum(segment_indices(c, ell, LagrangianFrame.vertical(c.m), **kw), HalfInt(0))
        except DegenerateCrossingError as exc:
            log.info("chord %s^%d: %s; using the spectral route", c.label, ell, exc)
            mu0, mu1 = _spectral_pair(c, ell, N_grid)
            route = "spectral"
    else:
        mu0, mu1 = _spectral_pair(c, ell, N_grid)
        route = "spectral"
    cz = None
    consistent = None
    if ell % 2 == 0 and check_cz:
        cz = rs_index_graph(iterate_chord(c, ell), **kw)
        half = mu_indices(c, ell // 2, check_cz=False, N_grid=N_grid, **kw)
        if half.nondeg_L0 and half.nondeg_L1 and half.route == "crossing":
            consistent = cz == half.mu_I + half.mu_minus_I
    return IterationReport(ell=ell, mu_I=mu0, mu_minus_I=mu1, mu_CZ_even=cz, nondeg_L0=nd0,
                           nondeg_L1=nd1, route=route, cz_consistent=consistent)


@dataclass
class MeanIndex:
    estimate: float
    bound: float
    ell: int
    sequence: List[HalfInt] = field(default_factory=list)

    @property
    def interval(self):
        return self.estimate - self.bound, self.estimate + self.bound


def iterate_indices(c: ChordPath, ell_max: int, L=None, **kw) -> List[HalfInt]:
    """``mu(Phi^l L, L)`` for ``l = 1..ell_max`` by catenation of segments."""
    L = LagrangianFrame.horizontal(c.m) if L is None else L
    segs = segment_indices(c, ell_max, L, **kw)
    out, acc = [], HalfInt(0)
    for s in segs:
        acc = acc + s
        out.append(acc)
    return out


def mean_index(c: ChordPath, ell_max: int = 64, **kw) -> MeanIndex:
    """Mean index ``lim mu(Phi^l L0, L0) / l`` estimated at ``l = ell_max``.

    The bound ``C / ell_max`` with ``C = m + 1`` accounts for the bounded
    oscillation of the index around its linear growth.
    """
    if ell_max < 8:
        raise ValueError("ell_max must be at least 8")
    seq = iterate_indices(c, ell_max, **kw)
    C = c.m + 1
    return MeanIndex(estimate=float(seq[-1]) / ell_max, bound=C / ell_max, ell=ell_max,
                     sequence=seq)


# --------------------------------------------------------------------------
# fast route: winding of det(conj(W_L) W) along each segment


def _base_samples(c: ChordPath, max_turn: float = 0.5):
    """Grid on ``[0, T]`` fine enough that ``arg det`` moves less than ``max_turn``.

    Eigenphases of the Souriau unitary move at most ``2 |S(t)|`` per unit time.
    """
    g = c.Phi.generator
    if g is None:
        raise SymreebError("the winding route needs a generator")
    probe = np.linspace(0.0, c.T, 65)
    smax = max(float(np.linalg.norm(g(t), 2)) for t in probe)
    n = max(17, int(np.ceil(c.T * 2 * smax * c.m * 1.25 / max_turn)) + 1)
    ts = np.linspace(0.0, c.T, n)
    return c.Phi.samples(ts)


def _winding_twice(Phis, start, WVc, m, ztol):
    F = Phis @ start
    Q, _ = np.linalg.qr(F)
    U = Q[:, :m, :] + 1j * Q[:, m:, :]
    M = WVc @ (U @ np.swapaxes(U, 1, 2))
    d = np.unwrap(np.angle(np.linalg.det(M)))
    lam0 = np.linalg.eigvals(M[0])
    lam1 = np.linalg.eigvals(M[-1])
    th0 = np.angle(lam0)
    phi1 = np.mod(np.angle(lam1), 2 * np.pi)
    z0 = np.abs(th0) <= ztol
    z1 = (phi1 <= ztol) | (phi1 >= 2 * np.pi - ztol)
    for arr, z in ((np.abs(th0), z0), (np.minimum(phi1, 2 * np.pi - phi1), z1)):
        amb = (~z) & (arr <= 10 * ztol)
        if np.any(amb):
            from .errors import ResolutionError

            raise ResolutionError("endpoint eigenphase within the ambiguity band")
    th0 = np.where(z0, 0.0, th0)
    phi1 = np.where(z1, 0.0, phi1)
    sum_end = th0.sum() + (d[-1] - d[0])
    ksum = (sum_end - phi1.sum()) / (2 * np.pi)
    kr = round(ksum)
    if abs(ksum - kr) > 1e-6:
        from .errors import ResolutionError

        raise ResolutionError("winding count is not integral; refine the grid")
    h0 = np.where(z0, 0, np.sign(th0)).sum()  # twice the start weights
    return int(2 * kr + np.sum(~z1) - h0)


def winding_indices(c: ChordPath, ell_max: int, L=None, ztol: float = 1e-7) -> List[HalfInt]:
    """``mu(Phi^l L, L)`` for ``l = 1..ell_max`` from eigenphase winding.

    Each segment contributes the half-integer winding of the eigenvalues of
    ``conj(W_L) W(t)`` around 1, read off from the continuous argument of
    its determinant and the endpoint eigenvalues. This is exact for the
    index and much cheaper than locating every crossing.
    """
    L = LagrangianFrame.horizontal(c.m) if L is None else \
        LagrangianFrame(np.asarray(L.F if isinstance(L, LagrangianFrame) else L))
    m = c.m
    Phis = _base_samples(c)
    I = c.I_matrix
    P2 = doubled_matrix(c.Phi(c.T))
    UL = L.complex_frame()
    WVc = np.conj(UL @ UL.T)
    G = L.F.copy()
    out, acc = [], 0
    for i in range(ell_max):
        if i % 2 == 0:
            start = G
        else:
            G = _orth(P2 @ G)
            start = _orth(I @ G)
        acc += _winding_twice(Phis, start, WVc, m, ztol)
        out.append(HalfInt(acc))
    return out
