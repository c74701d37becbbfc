"""Crossing forms and Robbin-Salamon type indices of Lagrangian paths.

Crossings of a path ``Lambda(t)`` with a fixed Lagrangian ``V`` are located
through the unitary ``W_V^* W(t)`` where ``W = U U^T`` and ``U = X + iY`` is a
unitary frame. Its eigenvalues equal to 1 count the intersection dimension and
their phases increase exactly along positive directions of the crossing form.
Lifting the phases gives both the crossing times and an independent winding
count, which is checked against the sum of crossing signatures.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np
from scipy.linalg import expm, logm
from scipy.optimize import brentq, linear_sum_assignment, minimize_scalar

from .errors import (
    DegenerateCrossingError,
    DimensionError,
    NoCrossingError,
    ResolutionError,
)
from .symplin import (
    DEFAULT_TOL,
    HalfInt,
    J0,
    LagrangianFrame,
    SymplecticPath,
    anti_involution,
    as_frame,
    intersection_dimension,
)

log = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


# --------------------------------------------------------------------------
# paths


def _orth(F):
    Q, R = np.linalg.qr(F)
    s = np.sign(np.diag(R))
    s[s == 0] = 1.0
    return Q * s


@dataclass(frozen=True, eq=False)
class LagrangianPath:
    """Path of Lagrangian subspaces on ``[t0, t1]``.

    Parameters
    ----------
    frame : callable
        ``frame(t)`` returns a ``2m x m`` matrix spanning ``Lambda(t)``.
    t0, t1 : float
        Time interval.
    m : int
        Half-dimension.
    generator : callable, optional
        ``S(t)``, symmetric ``2m x 2m``, with ``Lambda(t) = Phi_S(t) Lambda(t0)``
        and ``dPhi_S/dt = J0 S Phi_S``. When present, crossing forms are
        evaluated exactly as ``<v, S v>``.
    """

    frame: Callable[[float], np.ndarray]
    t0: float
    t1: float
    m: int
    generator: Optional[Callable[[float], np.ndarray]] = None

    def __post_init__(self):
        if not self.t1 > self.t0:
            raise ValueError("path interval must have t1 > t0")

    @property
    def T(self) -> float:
        return self.t1 - self.t0

    def __call__(self, t: float) -> np.ndarray:
        return np.asarray(self.frame(t), dtype=float)

    def canonical(self, t: float) -> np.ndarray:
        return _orth(self(t))

    @classmethod
    def from_symplectic(cls, phi: SymplecticPath, L) -> "LagrangianPath":
        """``t -> Phi(t) L`` on ``[0, T]``."""
        F = as_frame(L).F
        if F.shape[0] != 2 * phi.m:
            raise DimensionError("frame and path dimensions differ")
        return cls(lambda t: phi(t) @ F, 0.0, phi.T, phi.m, generator=phi.generator)

    @classmethod
    def from_generator(cls, S, L, T: float = 1.0) -> "LagrangianPath":
        """``t -> expm(t J0 S) L`` for a constant symmetric ``S``."""
        return cls.from_symplectic(SymplecticPath.constant_generator(S, T), L)

    @classmethod
    def from_samples(cls, ts, frames) -> "LagrangianPath":
        """Interpolate sampled frames.

        Between consecutive samples the path is the graph of a linearly
        interpolated symmetric matrix in the chart centred at the left sample.
        Consecutive samples must be transverse to that chart's complement.
        """
        ts = np.asarray(ts, dtype=float)
        if ts.ndim != 1 or len(ts) < 2 or np.any(np.diff(ts) <= 0):
            raise ValueError("sample times must be strictly increasing")
        Us = [_orth(as_frame(F).F) for F in frames]
        m = Us[0].shape[1]
        J = J0(m)
        charts = []
        for U, Un in zip(Us[:-1], Us[1:]):
            P = U.T @ Un
            Q = (J @ U).T @ Un
            if np.linalg.cond(P) > 1e8:
                raise ResolutionError("consecutive samples are too far apart to interpolate")
            A = Q @ np.linalg.inv(P)
            charts.append((U, (A + A.T) / 2))

        def frame(t):
            i = int(np.clip(np.searchsorted(ts, t, side="right") - 1, 0, len(ts) - 2))
            s = (t - ts[i]) / (ts[i + 1] - ts[i])
            U, A = charts[i]
            return U + (J @ U) @ (s * A)

        return cls(frame, float(ts[0]), float(ts[-1]), m)

    def restrict(self, a: float, b: float) -> "LagrangianPath":
        return LagrangianPath(self.frame, a, b, self.m, self.generator)

    def reversed(self) -> "LagrangianPath":
        """``t -> Lambda(t0 + t1 - t)``."""
        s = self.t0 + self.t1
        f = self.frame
        g = self.generator
        gen = None if g is None else (lambda t: -np.asarray(g(s - t)))
        return LagrangianPath(lambda t: f(s - t), self.t0, self.t1, self.m, gen)

    def transform(self, M) -> "LagrangianPath":
        """Image under a constant symplectic or anti-symplectic matrix."""
        M = np.asarray(M, dtype=float)
        J = J0(self.m)
        Minv = np.linalg.inv(M)
        f = self.frame
        gen = None
        if self.generator is not None:
            g = self.generator
            K = -J @ M @ J

            def gen(t):
                S = K @ np.asarray(g(t)) @ Minv
                return (S + S.T) / 2

        return LagrangianPath(lambda t: M @ f(t), self.t0, self.t1, self.m, gen)

    def direct_sum(self, other: "LagrangianPath") -> "LagrangianPath":
        """Path in R^{2(a+b)} with (q, p) ordering preserved."""
        if (self.t0, self.t1) != (other.t0, other.t1):
            raise ValueError("direct sum needs a common interval")
        a, b = self.m, other.m
        f, g = self.frame, other.frame

        def frame(t):
            F, G = f(t), g(t)
            out = np.zeros((2 * (a + b), a + b))
            out[:a, :a] = F[:a]
            out[a + b:2 * a + b, :a] = F[a:]
            out[a:a + b, a:] = G[:b]
            out[2 * a + b:, a:] = G[b:]
            return out

        gen = None
        if self.generator is not None and other.generator is not None:
            from .symplin import direct_sum

            sa, sb = self.generator, other.generator
            gen = lambda t: direct_sum(sa(t), sb(t))  # noqa: E731
        return LagrangianPath(frame, self.t0, self.t1, a + b, gen)


def frame_direct_sum(F, G) -> LagrangianFrame:
    F = as_frame(F).F
    G = as_frame(G).F
    a, b = F.shape[1], G.shape[1]
    out = np.zeros((2 * (a + b), a + b))
    out[:a, :a] = F[:a]
    out[a + b:2 * a + b, :a] = F[a:]
    out[a:a + b, a:] = G[:b]
    out[2 * a + b:, a:] = G[b:]
    return LagrangianFrame(out)


# --------------------------------------------------------------------------
# crossing forms


@dataclass(frozen=True, eq=False)
class CrossingRecord:
    t: float
    dim: int
    form: np.ndarray
    signature: int
    regular: bool
    # directions along which the form vanishes identically near t
    persistent: int = 0
    weight: HalfInt = field(default_factory=lambda: HalfInt(2))

    @property
    def contribution(self) -> HalfInt:
        return HalfInt(self.signature * self.weight.twice)


def _form_eigs(Q, scale, form_tol):
    w = np.linalg.eigvalsh((Q + Q.T) / 2) if Q.size else np.zeros(0)
    thr = form_tol * max(1.0, scale)
    return w, thr


def _chart_derivative(path: LagrangianPath, t: float, U: np.ndarray, h: Optional[float] = None):
    """Derivative of ``A(t)`` where ``Lambda(t) = graph of A over U``."""
    m = path.m
    JU = J0(m) @ U
    T = path.T

    def A(s):
        F = path(s)
        P = U.T @ F
        Q = JU.T @ F
        return Q @ np.linalg.solve(P, np.eye(m))

    def deriv(h):
        if t - h >= path.t0 - 1e-15 and t + h <= path.t1 + 1e-15:
            return (A(t + h) - A(t - h)) / (2 * h)
        if t + 2 * h <= path.t1 + 1e-15:
            return (-3 * A(t) + 4 * A(t + h) - A(t + 2 * h)) / (2 * h)
        return (3 * A(t) - 4 * A(t - h) + A(t - 2 * h)) / (2 * h)

    h = h or 1e-4 * T
    d1 = deriv(h)
    for _ in range(8):
        d2 = deriv(h / 2)
        err = np.max(np.abs(d1 - d2))
        if err <= 1e-6 * max(1.0, np.max(np.abs(d2))):
            # Richardson step for the second-order stencils
            return (4 * d2 - d1) / 3
        h /= 2
        d1 = d2
    raise ResolutionError(f"could not estimate the chart derivative at t={t:.6g}")


def _basis_at(path: LagrangianPath, V: np.ndarray, t: float, k: int):
    """Canonical frame at ``t`` and ``k`` coefficient vectors closest to ``V``."""
    U = path.canonical(t)
    m = path.m
    _, s, Vt = np.linalg.svd(V.T @ J0(m) @ U)
    X = Vt[m - k:].T if k else np.zeros((m, 0))
    return U, X, s


def _form_matrix(path, U, X, t, use_generator=True):
    if use_generator and path.generator is not None:
        S = np.asarray(path.generator(t), dtype=float)
        Vv = U @ X
        return Vv.T @ S @ Vv, float(np.max(np.abs(S))) if S.size else 1.0
    Ad = _chart_derivative(path, t, U)
    Ad = (Ad + Ad.T) / 2
    return X.T @ Ad @ X, float(np.max(np.abs(Ad))) if Ad.size else 1.0


def crossing_form(path: LagrangianPath, V, t0: float, tol: float = DEFAULT_TOL,
                  form_tol: float = 1e-7, check: bool = True) -> CrossingRecord:
    """Crossing form of ``path`` with ``V`` at time ``t0``.

    The form is computed in the chart of graphs over ``Lambda(t0)`` with
    complement ``J0 Lambda(t0)``. When the path carries a generator the exact
    form ``<v, S v>`` is used and, if ``check`` is set, compared against the
    chart value.

    Raises
    ------
    NoCrossingError
        If ``Lambda(t0)`` and ``V`` are transverse.
    ResolutionError
        If the chart derivative cannot be estimated or the two routes disagree.
    """
    V = as_frame(V)
    if V.m != path.m:
        raise DimensionError("frame and path dimensions differ")
    Lt = LagrangianFrame(path(t0))
    k = intersection_dimension(Lt, V, tol)
    if k == 0:
        raise NoCrossingError(f"Lambda({t0:g}) is transverse to V")
    U, X, _ = _basis_at(path, V.F, t0, k)
    Qc, scale = _form_matrix(path, U, X, t0, use_generator=False)
    Q = Qc
    if path.generator is not None:
        Q, scale = _form_matrix(path, U, X, t0, use_generator=True)
        if check and np.max(np.abs(Q - Qc)) > 1e-5 * max(1.0, scale):
            raise ResolutionError(
                f"chart and generator crossing forms disagree at t={t0:g} "
                f"({np.max(np.abs(Q - Qc)):.2e})")
    Q = (Q + Q.T) / 2
    w, thr = _form_eigs(Q, scale, form_tol)
    sig = int(np.sum(w > thr) - np.sum(w < -thr))
    regular = bool(np.all(np.abs(w) > thr))
    return CrossingRecord(t=float(t0), dim=k, form=Q, signature=sig, regular=regular)


# --------------------------------------------------------------------------
# eigenphase tracking


def _souriau(F: np.ndarray) -> np.ndarray:
    Q = _orth(F)
    m = Q.shape[1]
    U = Q[:m] + 1j * Q[m:]
    return U @ U.T


class _Tracker:
    """Lifted eigenphases of ``conj(W_V) W(t)`` on an adaptive grid."""

    def __init__(self, path: LagrangianPath, V: np.ndarray, n0: int, max_step: float,
                 max_points: int):
        self.path = path
        self.WVc = np.conj(_souriau(V))
        self.max_step = max_step
        self.max_points = max_points
        self.ts = list(np.linspace(path.t0, path.t1, n0))
        self.raw = {t: self._eig(t) for t in self.ts}
        self._refine()

    def _eig(self, t):
        return np.linalg.eigvals(self.WVc @ _souriau(self.path(t)))

    def raw_at(self, t):
        return self._eig(t)

    def _lift(self):
        ts = self.ts
        m = self.path.m
        th = np.empty((len(ts), m))
        th[0] = np.sort(np.angle(self.raw[ts[0]]))
        for i in range(1, len(ts)):
            prev = th[i - 1]
            lam = self.raw[ts[i]]
            ep = np.exp(1j * prev)
            cost = np.abs(ep[:, None] - lam[None, :])
            r, c = linear_sum_assignment(cost)
            nxt = np.empty(m)
            nxt[r] = prev[r] + np.angle(lam[c] / ep[r])
            th[i] = nxt
        return th

    def _refine(self):
        while True:
            th = self._lift()
            steps = np.max(np.abs(np.diff(th, axis=0)), axis=1) if th.shape[1] else \
                np.zeros(len(self.ts) - 1)
            bad = np.nonzero(steps > self.max_step)[0]
            if len(bad) == 0:
                self.theta = th
                self.grid = np.asarray(self.ts)
                return
            if len(self.ts) + len(bad) > self.max_points:
                raise ResolutionError(
                    f"phase tracking needs more than {self.max_points} samples")
            new = [(self.ts[i] + self.ts[i + 1]) / 2 for i in bad]
            for t in new:
                self.raw[t] = self._eig(t)
            self.ts = sorted(self.ts + new)

    def phase_near(self, t, predicted):
        """Lifted phase at ``t`` of the eigenvalue closest to ``predicted``."""
        lam = self._eig(t)
        ep = np.exp(1j * predicted)
        j = int(np.argmin(np.abs(lam - ep)))
        return predicted + float(np.angle(lam[j] / ep))


def _h(theta, ztol):
    """Half-integer winding weight of a lifted phase, as twice its value."""
    k = np.round(theta / TWO_PI)
    if abs(theta - TWO_PI * k) <= ztol:
        return 2 * int(k)
    return int(np.floor(theta / TWO_PI) + np.ceil(theta / TWO_PI))


@dataclass
class IndexReport:
    index: HalfInt
    crossings: List[CrossingRecord]
    winding: HalfInt
    samples: int


def rs_index_report(path: LagrangianPath, V, *, ztol: float = 1e-8, form_tol: float = 1e-6,
                    n0: int = 65, max_step: float = 0.25, max_points: int = 200000,
                    xtol: float = 1e-10) -> IndexReport:
    """Robbin-Salamon index of ``path`` relative to ``V`` with its crossings.

    Parameters
    ----------
    ztol : float
        Phase tolerance below which an eigenphase is treated as exactly on the
        Maslov cycle.
    form_tol : float
        Relative threshold for zero eigenvalues of crossing forms.
    xtol : float
        Crossing times are refined to ``xtol * T``.

    Raises
    ------
    DegenerateCrossingError
        A crossing form is singular and the kernel is not certified as a
        persistent zero direction.
    ResolutionError
        The sum of crossing signatures disagrees with the winding count.
    """
    V = as_frame(V)
    if V.m != path.m:
        raise DimensionError("frame and path dimensions differ")
    m = path.m
    T = path.T
    tr = _Tracker(path, V.F, n0, max_step, max_points)
    ts, th = tr.grid, tr.theta
    nT = len(ts)
    coarse = T / (n0 - 1)

    k_near = np.round(th / TWO_PI)
    dev = th - TWO_PI * k_near
    at_zero = np.abs(dev) <= ztol

    # persistent zero: at zero on every sample within one coarse step
    persistent = np.zeros_like(at_zero)
    for j in range(m):
        i = 0
        while i < nT:
            if not at_zero[i, j]:
                i += 1
                continue
            e = i
            while e + 1 < nT and at_zero[e + 1, j]:
                e += 1
            if ts[e] - ts[i] >= coarse * (1 - 1e-9):
                persistent[i:e + 1, j] = True
                if not (i == 0 and e == nT - 1):
                    t_edge = ts[i] if i > 0 else ts[e]
                    raise DegenerateCrossingError(
                        f"eigenphase leaves the Maslov cycle at t~{t_edge:.6g} "
                        "after vanishing on an interval; use the spectral route",
                        time=float(t_edge))
            i = e + 1

    events = []  # (time, number of crossing tracks)
    xt = xtol * T

    def refine(j, a_idx, b_idx, target):
        ta, tb = ts[a_idx], ts[b_idx]
        tha, thb = th[a_idx, j], th[b_idx, j]

        def g(t):
            pred = tha + (thb - tha) * (t - ta) / (tb - ta)
            return tr.phase_near(t, pred) - target

        ga, gb = tha - target, thb - target
        if ga * gb > 0:
            raise ResolutionError("lost the sign change while refining a crossing")
        return brentq(lambda t: g(t) if ta < t < tb else (ga if t <= ta else gb), ta, tb,
                      xtol=xt, rtol=4 * np.finfo(float).eps)

    for j in range(m):
        for i in range(nT - 1):
            if persistent[i, j] or persistent[i + 1, j]:
                continue
            a, b = th[i, j], th[i + 1, j]
            lo, hi = min(a, b), max(a, b)
            for k in range(int(np.ceil((lo - ztol) / TWO_PI)), int(np.floor((hi + ztol) / TWO_PI)) + 1):
                target = TWO_PI * k
                da, db = a - target, b - target
                if abs(da) <= ztol or abs(db) <= ztol:
                    continue  # handled through zero samples below
                if da * db < 0:
                    events.append(refine(j, i, i + 1, target))
        # isolated zero samples in the interior
        for i in range(1, nT - 1):
            if at_zero[i, j] and not persistent[i, j]:
                target = TWO_PI * k_near[i, j]
                da, db = th[i - 1, j] - target, th[i + 1, j] - target
                if abs(da) > ztol and abs(db) > ztol and da * db < 0:
                    events.append(refine(j, i - 1, i + 1, target))
                elif abs(da) > ztol and abs(db) > ztol:
                    raise DegenerateCrossingError(
                        f"tangential crossing at t~{ts[i]:.6g}; use the spectral route",
                        time=float(ts[i]))
        # local minima of the distance to the cycle: touches or double crossings
        for i in range(1, nT - 1):
            if persistent[i, j] or at_zero[i, j]:
                continue
            d = np.abs(dev[i - 1:i + 2, j])
            if not (d[1] <= d[0] and d[1] <= d[2] and d[1] < 0.1):
                continue
            target = TWO_PI * k_near[i, j]
            side = np.sign(dev[i, j])
            if np.sign(dev[i - 1, j]) != side or np.sign(dev[i + 1, j]) != side:
                continue
            ta, tb = ts[i - 1], ts[i + 1]
            thi = th[i, j]

            def f(t):
                return side * (tr.phase_near(t, thi) - target)

            res = minimize_scalar(f, bounds=(ta, tb), method="bounded",
                                  options={"xatol": xt})
            fmin = float(res.fun)
            if fmin < -ztol:
                tm = float(res.x)
                # two crossings between samples
                g = lambda t: tr.phase_near(t, thi) - target  # noqa: E731
                events.append(brentq(g, ta, tm, xtol=xt))
                events.append(brentq(g, tm, tb, xtol=xt))
            elif fmin <= ztol:
                raise DegenerateCrossingError(
                    f"tangential crossing at t~{res.x:.6g}; use the spectral route",
                    time=float(res.x))

    # group simultaneous crossings
    events.sort()
    groups: List[List[float]] = []
    for t in events:
        if groups and t - groups[-1][-1] <= max(100 * xt, 1e-9 * T):
            groups[-1].append(t)
        else:
            groups.append([t])

    Vf = V.F
    records: List[CrossingRecord] = []

    def record(t, n_cross, n_pers, weight):
        k = n_cross + n_pers
        U, X, s = _basis_at(path, Vf, t, k)
        if k < m and s[m - k - 1] < 1e3 * max(s[m - k] if k else 0.0, 1e-12) and s[m - k - 1] < 1e-6:
            raise ResolutionError(f"intersection dimension at t={t:.6g} is not resolved")
        Q, scale = _form_matrix(path, U, X, t)
        Q = (Q + Q.T) / 2
        w, thr = _form_eigs(Q, scale, form_tol)
        nz = int(np.sum(np.abs(w) <= thr))
        if nz != n_pers:
            raise DegenerateCrossingError(
                f"crossing form at t={t:.6g} has {nz} zero eigenvalue(s) without a "
                "persistent-zero certificate; use the spectral route",
                time=float(t), form=Q)
        sig = int(np.sum(w > thr) - np.sum(w < -thr))
        records.append(CrossingRecord(t=float(t), dim=k, form=Q, signature=sig,
                                      regular=(nz == 0), persistent=n_pers,
                                      weight=weight))
        return sig

    # endpoints
    total2 = 0
    for idx, t in ((0, path.t0), (nT - 1, path.t1)):
        n_cross = int(np.sum(at_zero[idx] & ~persistent[idx]))
        n_pers = int(np.sum(persistent[idx]))
        if n_cross + n_pers:
            total2 += record(t, n_cross, n_pers, HalfInt(1))
    for grp in groups:
        t = float(np.mean(grp))
        # persistent tracks at the nearest sample
        i = int(np.argmin(np.abs(ts - t)))
        n_pers = int(np.sum(persistent[i]))
        total2 += 2 * record(t, len(grp), n_pers, HalfInt(2))

    index = HalfInt(total2)
    wind = HalfInt(sum(_h(th[-1, j], ztol) - _h(th[0, j], ztol) for j in range(m)))
    if wind != index:
        raise ResolutionError(
            f"crossing sum {index} disagrees with winding count {wind}")
    records.sort(key=lambda r: r.t)
    return IndexReport(index=index, crossings=records, winding=wind, samples=nT)


def rs_index(path: LagrangianPath, V, **kw) -> HalfInt:
    """Robbin-Salamon index ``mu(Lambda, V)`` as an exact half-integer.

    Endpoint crossings contribute half their signature, interior crossings
    their full signature. See :func:`rs_index_report` for options and errors.

    Examples
    --------
    >>> from symreeb.symplin import rotation
    >>> L0 = LagrangianFrame.horizontal(1)
    >>> p = LagrangianPath(lambda t: rotation(np.pi * t) @ L0.F, 0.0, 1.0, 1)
    >>> rs_index(p, L0)
    HalfInt('1')
    """
    return rs_index_report(path, V, **kw).index


# --------------------------------------------------------------------------
# graph construction


def _reorder_qp(m: int) -> np.ndarray:
    """Permutation taking (q1, p1, q2, p2) blocks to (q1, q2, p1, p2)."""
    n = 2 * m
    idx = np.r_[np.arange(m), np.arange(n, n + m), np.arange(m, n), np.arange(n + m, 2 * n)]
    P = np.zeros((2 * n, 2 * n))
    P[np.arange(2 * n), idx] = 1.0
    return P


def graph_path(psi: SymplecticPath) -> tuple:
    """Graph of ``psi`` and the diagonal as Lagrangians in R^{4m}.

    The product ``(-omega) + omega`` is identified with the standard form by
    ``(x, y) -> (I x, y)``.
    """
    m = psi.m
    n = 2 * m
    I = anti_involution(m)
    P = _reorder_qp(m)
    base = np.vstack([I, np.eye(n)])

    def frame(t):
        return P @ np.vstack([I, psi(t)])

    gen = None
    if psi.generator is not None:
        g = psi.generator

        def gen(t):
            S = np.zeros((2 * n, 2 * n))
            S[n:, n:] = g(t)
            return P @ S @ P.T

    path = LagrangianPath(frame, 0.0, psi.T, n, gen)
    return path, LagrangianFrame(P @ base)


def rs_index_graph(psi: SymplecticPath, **kw) -> HalfInt:
    """Index of the graph of ``psi`` relative to the diagonal.

    For a path starting at the identity this is the Conley-Zehnder index.
    """
    path, diag = graph_path(psi)
    return rs_index(path, diag, **kw)


# --------------------------------------------------------------------------
# Hormander index


def _realify_hermitian(H: np.ndarray) -> np.ndarray:
    A, B = H.real, H.imag
    return np.block([[A, -B], [B, A]])


def geodesic_path(L1, L2) -> LagrangianPath:
    """Unitary geodesic from ``L1`` to ``L2`` on ``[0, 1]`` with constant generator."""
    F1, F2 = as_frame(L1), as_frame(L2)
    U1, U2 = F1.complex_frame(), F2.complex_frame()
    K = logm(U1.conj().T @ U2)
    Kp = U1 @ K @ U1.conj().T
    H = -1j * Kp
    H = (H + H.conj().T) / 2
    S = _realify_hermitian(H)
    A = J0(F1.m) @ S
    F = F1.F
    return LagrangianPath(lambda t: expm(t * A) @ F, 0.0, 1.0, F1.m, generator=lambda t: S)


def hormander_index(V1, V2, L1, L2, *, seed: int = 0, retries: int = 5, **kw) -> HalfInt:
    """Hormander index ``s(V1, V2; L1, L2) = mu(Lambda, V2) - mu(Lambda, V1)``.

    ``Lambda`` runs from ``L1`` to ``L2``. If the direct geodesic meets a
    degenerate crossing the path is rerouted through a random Lagrangian.
    """
    V1, V2, L1, L2 = (as_frame(x) for x in (V1, V2, L1, L2))
    if len({x.m for x in (V1, V2, L1, L2)}) != 1:
        raise DimensionError("all four Lagrangians must share the half-dimension")

    def diff(path):
        return rs_index(path, V2, **kw) - rs_index(path, V1, **kw)

    try:
        return diff(geodesic_path(L1, L2))
    except (DegenerateCrossingError, ResolutionError) as exc:
        last = exc
    rng = np.random.default_rng(seed)
    m = L1.m
    for _ in range(retries):
        A = rng.standard_normal((m, m))
        Q, _ = np.linalg.qr(A + 1j * rng.standard_normal((m, m)))
        M = LagrangianFrame(np.vstack([Q.real, Q.imag]))
        try:
            return diff(geodesic_path(L1, M)) + diff(geodesic_path(M, L2))
        except (DegenerateCrossingError, ResolutionError) as exc:
            last = exc
            log.debug("hormander reroute failed: %s", exc)
    raise last


def signature(A, tol: float = 1e-10) -> int:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    w = np.linalg.eigvalsh((A + A.T) / 2)
    thr = tol * max(1.0, np.max(np.abs(w)) if w.size else 1.0)
    return int(np.sum(w > thr) - np.sum(w < -thr))


def hormander_graph_formula(A0, A1, B0, B1) -> HalfInt:
    """Hormander index of graph Lagrangians.

    With ``V1 = gr A0``, ``V2 = gr A1``, ``L1 = gr B0``, ``L2 = gr B1``::

        s = (sgn(B1 - A1) - sgn(B0 - A1) - sgn(B1 - A0) + sgn(B0 - A0)) / 2
    """
    tw = signature(np.subtract(B1, A1)) - signature(np.subtract(B0, A1)) \
        - signature(np.subtract(B1, A0)) + signature(np.subtract(B0, A0))
    return HalfInt(tw)
