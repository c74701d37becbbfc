"""Conjugation-invariant starshaped hypersurfaces ``H^{-1}(1)`` in R^{2n}.

Points are ``z = (q_1..q_n, p_1..p_n)``; complex conjugation is
``I = diag(I_n, -I_n)``. ``H`` is homogeneous of degree two, so on
``Sigma = H^{-1}(1)`` the Reeb field equals ``X_H = J0 grad H`` and brake
orbits are chords from ``{p = 0}`` back to itself.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.stats import qmc

from ._parallel import parallel_map
from .errors import (
    DegenerateCrossingError,
    InvariantError,
    IntegrationError,
    PreconditionError,
    ShootingError,
)
from .iterate import ChordPath, iterate_indices
from .maslov import LagrangianPath, rs_index
from .specflow import IMAG, REAL, SymmetricMatrixPath, mu_spectral
from .symplin import HalfInt, J0, LagrangianFrame, SymplecticPath, anti_involution, symplectic_defect

log = logging.getLogger(__name__)

RTOL = 1e-12
ATOL = 1e-12
ENERGY_TOL = 1e-9
SYMPLECTIC_TOL = 1e-8


# --------------------------------------------------------------------------
# models


@dataclass(frozen=True, eq=False)
class HypersurfaceModel:
    """Degree-two homogeneous Hamiltonian with value, gradient and Hessian.

    Use the constructors :meth:`ellipsoid`, :meth:`perturbed_ellipsoid` or
    :meth:`from_function`.
    """

    n: int
    H: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    hess: Callable[[np.ndarray], np.ndarray]
    family: str = "user"
    params: dict = field(default_factory=dict)
    convex: bool = False

    def X(self, z) -> np.ndarray:
        """Hamiltonian (= Reeb) vector field."""
        return J0(self.n) @ self.grad(z)

    # --- constructors

    @classmethod
    def ellipsoid(cls, axes: Sequence[float]) -> "HypersurfaceModel":
        """``H = sum pi |z_j|^2 / a_j``; the j-th axis circle has period ``a_j``."""
        a = np.asarray(axes, dtype=float)
        if np.any(a <= 0):
            raise ValueError("ellipsoid axes must be positive")
        d = np.r_[np.pi / a, np.pi / a]
        D2 = np.diag(2 * d)
        return cls(n=len(a), H=lambda z: float(np.dot(d * z, z)), grad=lambda z: 2 * d * z,
                   hess=lambda z: D2, family="ellipsoid", params={"axes": a.tolist()},
                   convex=True)

    @classmethod
    def perturbed_ellipsoid(cls, axes: Sequence[float], epsilon: float, B) -> "HypersurfaceModel":
        """``H = H_ell (1 + eps z^T B z / |z|^2)``.

        ``B`` is symmetric with ``I B I = B`` (no q-p coupling), which keeps
        ``H`` conjugation-invariant. Convexity is sampled, not assumed.
        """
        a = np.asarray(axes, dtype=float)
        n = len(a)
        B = np.asarray(B, dtype=float)
        if B.shape != (2 * n, 2 * n):
            raise ValueError(f"perturbation matrix must be {2 * n}x{2 * n}")
        I = anti_involution(n)
        if not np.allclose(B, B.T) or not np.allclose(I @ B @ I, B):
            raise InvariantError("perturbation matrix must be symmetric and commute with I")
        eps = float(epsilon)
        wmin = np.linalg.eigvalsh(B).min()
        if 1 + eps * min(wmin, 0) <= 0 or 1 + eps * np.linalg.eigvalsh(B).max() <= 0:
            raise ValueError("perturbation makes H non-positive; reduce epsilon")
        d = np.r_[np.pi / a, np.pi / a]

        def parts(z):
            z = np.asarray(z, dtype=float)
            r2 = z @ z
            E = float(np.dot(d * z, z))
            Bz = B @ z
            g = float(z @ Bz) / r2
            gE = 2 * d * z
            gg = 2 * (Bz - g * z) / r2
            return z, r2, E, g, gE, gg

        def H(z):
            _, _, E, g, _, _ = parts(z)
            return E * (1 + eps * g)

        def grad(z):
            _, _, E, g, gE, gg = parts(z)
            return gE * (1 + eps * g) + eps * E * gg

        def hess(z):
            z, r2, E, g, gE, gg = parts(z)
            Hg = (2 * (B - g * np.eye(2 * n)) - 2 * np.outer(z, gg) - 2 * np.outer(gg, z)) / r2
            out = np.diag(2 * d) * (1 + eps * g) + eps * (np.outer(gE, gg) + np.outer(gg, gE)) \
                + eps * E * Hg
            return (out + out.T) / 2

        model = cls(n=n, H=H, grad=grad, hess=hess, family="perturbed-ellipsoid",
                    params={"axes": a.tolist(), "epsilon": eps, "B": B.tolist()})
        object.__setattr__(model, "convex", model.sample_convexity())
        return model

    @classmethod
    def from_function(cls, n: int, H, grad=None, hess=None, convex: Optional[bool] = None,
                      h: float = 1e-5) -> "HypersurfaceModel":
        """Wrap a user Hamiltonian; missing derivatives use central differences."""
        if grad is None:
            def grad(z):
                z = np.asarray(z, dtype=float)
                E = np.eye(2 * n) * h
                return np.array([(H(z + e) - H(z - e)) / (2 * h) for e in E])
        if hess is None:
            g = grad

            def hess(z):
                z = np.asarray(z, dtype=float)
                E = np.eye(2 * n) * h
                M = np.array([(g(z + e) - g(z - e)) / (2 * h) for e in E])
                return (M + M.T) / 2
        model = cls(n=n, H=H, grad=grad, hess=hess, family="user")
        object.__setattr__(model, "convex", model.sample_convexity() if convex is None else convex)
        return model

    @classmethod
    def from_spec(cls, spec: dict) -> "HypersurfaceModel":
        """Build from a mapping with ``family`` and its parameters.

        ``{"family": "ellipsoid", "axes": [...]}`` or
        ``{"family": "perturbed-ellipsoid", "axes": [...], "epsilon": e, "B": [[...]]}``.
        """
        fam = spec.get("family")
        if fam == "ellipsoid":
            return cls.ellipsoid(spec["axes"])
        if fam == "perturbed-ellipsoid":
            return cls.perturbed_ellipsoid(spec["axes"], spec["epsilon"], spec["B"])
        raise ValueError(f"unknown model family {fam!r}")

    @classmethod
    def load(cls, path) -> "HypersurfaceModel":
        with open(path) as fh:
            return cls.from_spec(json.load(fh))

    # --- checks

    def _samples(self, k: int, seed: int):
        rng = np.random.default_rng(seed)
        return rng.standard_normal((k, 2 * self.n))

    def validate(self, k: int = 32, seed: int = 0, tol: float = 1e-9) -> None:
        """Check homogeneity, conjugation invariance and ``alpha(X_H) = 1``.

        Raises
        ------
        InvariantError
            With the name of the failed property.
        """
        I = anti_involution(self.n)
        rng = np.random.default_rng(seed + 1)
        for z in self._samples(k, seed):
            h = self.H(z)
            scale = max(1.0, abs(h))
            r = rng.uniform(0.3, 3.0)
            if abs(self.H(r * z) - r * r * h) > tol * scale * r * r:
                raise InvariantError("homogeneity H(rz) = r^2 H(z) fails")
            if abs(self.H(I @ z) - h) > tol * scale:
                raise InvariantError("invariance H(Iz) = H(z) fails")
            zs = z / np.sqrt(h)
            X = self.X(zs)
            alpha = 0.5 * float((J0(self.n) @ zs) @ X)
            if abs(alpha - 1) > 1e-7:
                raise InvariantError("Reeb normalization alpha(X_H) = 1 fails")

    def sample_convexity(self, k: int = 256, seed: int = 0) -> bool:
        """Positive-definite Hessian on random sample points."""
        for z in self._samples(k, seed):
            if np.linalg.eigvalsh(self.hess(z)).min() <= 0:
                return False
        return True

    def to_level(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        return z / np.sqrt(self.H(z))


# --------------------------------------------------------------------------
# flow


@dataclass(frozen=True, eq=False)
class Trajectory:
    t: np.ndarray
    z: np.ndarray
    sol: Optional[Callable] = None
    drift: float = 0.0

    def __call__(self, t) -> np.ndarray:
        if self.sol is None:
            return self.z[-1]
        return self.sol(t)


def reeb_flow(model: HypersurfaceModel, z0, T: float, *, rtol: float = RTOL, atol: float = ATOL,
              energy_tol: float = ENERGY_TOL, level_tol: float = 1e-8, samples: int = 201) -> Trajectory:
    """Integrate ``z' = X_H(z)`` from ``z0`` on ``Sigma`` for time ``T`` (may be negative).

    Raises
    ------
    IntegrationError
        If ``|H(z(t)) - 1|`` exceeds ``energy_tol``; reports the worst time.
    """
    z0 = np.asarray(z0, dtype=float)
    if abs(model.H(z0) - 1) > level_tol:
        raise PreconditionError(f"start point is not on the level set (H = {model.H(z0):.12g})")
    if T == 0:
        return Trajectory(t=np.zeros(1), z=z0[None, :].copy())
    J = J0(model.n)
    sol = solve_ivp(lambda t, z: J @ model.grad(z), (0.0, T), z0, method="DOP853",
                    rtol=rtol, atol=atol, dense_output=True)
    if not sol.success:
        raise IntegrationError(sol.message)
    ts = np.linspace(0.0, T, samples)
    zs = sol.sol(ts).T
    dev = np.array([abs(model.H(z) - 1) for z in zs])
    worst = int(np.argmax(dev))
    if dev[worst] > energy_tol:
        raise IntegrationError(f"energy drift {dev[worst]:.2e} at t={ts[worst]:.6g}",
                               worst_time=float(ts[worst]))
    return Trajectory(t=ts, z=zs, sol=sol.sol, drift=float(dev[worst]))


def _flow_with_variation(model, z0, T, rtol=RTOL, atol=ATOL):
    n2 = 2 * model.n
    J = J0(model.n)

    def rhs(t, y):
        z = y[:n2]
        P = y[n2:].reshape(n2, n2)
        return np.concatenate([J @ model.grad(z), (J @ model.hess(z) @ P).ravel()])

    y0 = np.concatenate([z0, np.eye(n2).ravel()])
    sol = solve_ivp(rhs, (0.0, T), y0, method="DOP853", rtol=rtol, atol=atol, dense_output=True)
    if not sol.success:
        raise IntegrationError(sol.message)
    return sol


# --------------------------------------------------------------------------
# chords


@dataclass(frozen=True, eq=False)
class ReebChord:
    q0: np.ndarray
    T: float
    trajectory: Trajectory
    residual: float
    pair_verified: Optional[bool] = None

    @property
    def start(self) -> np.ndarray:
        return np.r_[self.q0, np.zeros_like(self.q0)]

    @property
    def end(self) -> np.ndarray:
        return self.trajectory(self.T)

    def closure(self, model: HypersurfaceModel) -> Trajectory:
        """The symmetric periodic orbit ``c^2`` on ``[0, 2T]``."""
        return reeb_flow(model, self.start, 2 * self.T)

    def to_dict(self) -> dict:
        return {"q0": self.q0.tolist(), "T": self.T, "residual": self.residual,
                "pair_verified": self.pair_verified}


@dataclass
class DegenerateFamily:
    T: float
    q0: np.ndarray
    kernel_dim: int

    def to_dict(self) -> dict:
        return {"T": self.T, "q0": self.q0.tolist(), "kernel_dim": self.kernel_dim}


@dataclass
class BrakeSearch:
    chords: List[ReebChord]
    degenerate_families: List[DegenerateFamily]
    failed_seeds: List[int]


def _tangent_basis(g):
    """Orthonormal basis of ``g^perp`` in R^n."""
    n = len(g)
    Q, _ = np.linalg.qr(np.column_stack([g, np.eye(n)]))
    return Q[:, 1:n]


def default_seeds(model: HypersurfaceModel, n_sobol: int = 16, seed: int = 0) -> np.ndarray:
    """Coordinate-axis points and a scrambled Sobol sample, on the level set in ``{p = 0}``."""
    n = model.n
    pts = [s * e for e in np.eye(n) for s in (1.0, -1.0)]
    if n > 1 and n_sobol:
        from scipy.stats import norm

        u = qmc.Sobol(d=n, scramble=True, seed=seed).random(n_sobol)
        g = norm.ppf(np.clip(u, 1e-9, 1 - 1e-9))
        pts.extend(g / np.linalg.norm(g, axis=1, keepdims=True))
    out = []
    for q in pts:
        z = np.r_[q, np.zeros(n)]
        out.append(model.to_level(z)[:n])
    return np.array(out)


def _newton(model, q0, T0, tol, max_iter=40):
    n = model.n
    J = J0(n)

    def level(q):
        z = model.to_level(np.r_[q, np.zeros(n)])
        return z[:n]

    def residual(q, T):
        sol = solve_ivp(lambda t, z: J @ model.grad(z), (0.0, T), np.r_[q, np.zeros(n)],
                        method="DOP853", rtol=RTOL, atol=ATOL)
        return sol.y[n:, -1]

    q, T = level(q0), T0
    F = residual(q, T)
    for _ in range(max_iter):
        nF = np.linalg.norm(F)
        if nF < tol:
            break
        sol = _flow_with_variation(model, np.r_[q, np.zeros(n)], T)
        y = sol.y[:, -1]
        zT = y[:2 * n]
        P = y[2 * n:].reshape(2 * n, 2 * n)
        E = _tangent_basis(model.grad(np.r_[q, np.zeros(n)])[:n])
        Jac = np.column_stack([P[n:, :n] @ E, (J @ model.grad(zT))[n:]])
        step, *_ = np.linalg.lstsq(Jac, -F, rcond=1e-12)
        lam = 1.0
        while lam > 1e-4:
            qn = level(q + E @ step[:-1] * lam)
            Tn = T + step[-1] * lam
            if Tn <= 0:
                lam /= 2
                continue
            Fn = residual(qn, Tn)
            if np.linalg.norm(Fn) < (1 - 1e-4 * lam) * nF:
                break
            lam /= 2
        else:
            return None
        q, T, F = qn, Tn, Fn
    if np.linalg.norm(F) >= tol:
        return None
    sol = _flow_with_variation(model, np.r_[q, np.zeros(n)], T)
    P = sol.y[2 * n:, -1].reshape(2 * n, 2 * n)
    zT = sol.y[:2 * n, -1]
    E = _tangent_basis(model.grad(np.r_[q, np.zeros(n)])[:n])
    Jac = np.column_stack([P[n:, :n] @ E, (J @ model.grad(zT))[n:]])
    sv = np.linalg.svd(Jac, compute_uv=False)
    return q, T, float(np.linalg.norm(F)), sv


def _p_minima(traj: Trajectory, n: int, T_lo: float):
    ts = traj.t
    pn = np.linalg.norm(traj.z[:, n:], axis=1)
    out = []
    for i in range(1, len(ts) - 1):
        if ts[i] > T_lo and pn[i] <= pn[i - 1] and pn[i] <= pn[i + 1]:
            out.append((ts[i], pn[i]))
    return out


def _interior_brake(model, chord_traj, n, T, tol):
    """True if ``p`` vanishes strictly inside ``(0, T)``."""
    ts = np.linspace(0, T, 2001)
    zs = chord_traj(ts).T
    pn = np.linalg.norm(zs[:, n:], axis=1)
    scale = max(1.0, float(np.max(pn)))
    for i in range(1, len(ts) - 1):
        if pn[i] <= pn[i - 1] and pn[i] <= pn[i + 1] and 0.01 * T < ts[i] < 0.99 * T:
            if pn[i] < 1e-3 * scale:
                from scipy.optimize import minimize_scalar

                r = minimize_scalar(lambda t: np.linalg.norm(chord_traj(t)[n:]),
                                    bounds=(ts[i - 1], ts[i + 1]), method="bounded",
                                    options={"xatol": 1e-12})
                if r.fun < 1e-6 * scale:
                    return True
    return False


def find_brake_chords(model: HypersurfaceModel, seeds=None, newton_tol: float = 1e-11, *,
                      T_scan: Optional[float] = None, dedup_tol: float = 1e-6,
                      singular_tol: float = 1e-7, workers: int = 1) -> BrakeSearch:
    """Simple brake chords ``c: [0, T] -> Sigma`` with ``c(0), c(T) in {p = 0}``.

    Each seed ``q0`` is flowed for ``T_scan``; local minima of ``|p(t)|``
    seed Newton iterations on ``(q0, T)`` with ``q0`` kept on the level set.
    Solutions whose Jacobian is singular are reported as degenerate families.

    Returns
    -------
    BrakeSearch
        Simple chords sorted by ``T``, degenerate families and failed seeds.
    """
    n = model.n
    seeds = default_seeds(model) if seeds is None else np.atleast_2d(np.asarray(seeds, float))
    if T_scan is None:
        r2 = max(float(np.sum(model.to_level(np.r_[q, np.zeros(n)]) ** 2)) for q in seeds)
        T_scan = np.pi * r2
    jobs = []
    for si, q in enumerate(seeds):
        z0 = model.to_level(np.r_[q, np.zeros(n)])
        traj = reeb_flow(model, z0, T_scan, samples=801)
        for t, _ in _p_minima(traj, n, 1e-3 * T_scan):
            jobs.append((si, z0[:n], t))
    results = parallel_map(_newton, [(model, q, t, newton_tol) for _, q, t in jobs], workers)

    chords: List[ReebChord] = []
    fams: List[DegenerateFamily] = []
    failed = set()
    solved = set()
    for (si, _, _), res in zip(jobs, results):
        if res is None:
            failed.add(si)
            continue
        solved.add(si)
        q, T, resid, sv = res
        if T < 1e-3 * T_scan:
            failed.add(si)
            continue
        if T > T_scan * (1 + 1e-9):
            continue
        z0 = np.r_[q, np.zeros(n)]
        if sv[-1] < singular_tol * max(1.0, sv[0]):
            k = int(np.sum(sv < singular_tol * max(1.0, sv[0])))
            if not any(abs(f.T - T) < dedup_tol for f in fams):
                fams.append(DegenerateFamily(T=T, q0=q, kernel_dim=k))
            continue
        traj = reeb_flow(model, z0, T)
        if _interior_brake(model, traj, n, T, newton_tol):
            continue
        dup = False
        for c in chords:
            if abs(c.T - T) < dedup_tol and (np.linalg.norm(c.start - z0) < dedup_tol
                                             or np.linalg.norm(c.end - z0) < dedup_tol):
                dup = True
                break
        if dup:
            continue
        chords.append(ReebChord(q0=q, T=float(T), trajectory=traj, residual=resid,
                                pair_verified=verify_pair(model, q, T, traj)))
    chords.sort(key=lambda c: c.T)
    fams.sort(key=lambda f: f.T)
    return BrakeSearch(chords=chords, degenerate_families=fams,
                       failed_seeds=sorted(failed - solved))


def verify_pair(model: HypersurfaceModel, q0, T: float, traj: Optional[Trajectory] = None,
                tol: float = 1e-8) -> bool:
    """Check that ``I c(T - t)`` is again a chord by integrating it.

    Reversibility makes it a trajectory for any ``T``; the chord condition
    is that it starts and ends in ``{p = 0}``.
    """
    n = model.n
    traj = traj or reeb_flow(model, np.r_[q0, np.zeros(n)], T)
    I = anti_involution(n)
    start = I @ traj(T)
    if np.linalg.norm(start[n:]) >= tol:
        return False
    other = reeb_flow(model, start, T)
    ts = np.linspace(0, T, 9)
    ref = np.array([I @ traj(T - t) for t in ts])
    got = other.sol(ts).T
    return bool(np.max(np.abs(ref - got)) < tol and np.linalg.norm(other(T)[n:]) < tol)


# --------------------------------------------------------------------------
# linearization and indices


def linearized_flow(model: HypersurfaceModel, chord: ReebChord, *,
                    tol: float = SYMPLECTIC_TOL) -> SymplecticPath:
    """``Phi' = J0 Hess H(c(t)) Phi`` along the chord, with its generator attached.

    Raises
    ------
    IntegrationError
        If ``|Phi^T J0 Phi - J0|`` exceeds ``tol`` at a sample.
    """
    n = model.n
    n2 = 2 * n
    sol = _flow_with_variation(model, chord.start, chord.T)
    T = chord.T

    def phi(t):
        if t <= 0:
            return np.eye(n2)
        return sol.sol(min(t, T))[n2:].reshape(n2, n2)

    def gen(t):
        return model.hess(sol.sol(min(max(t, 0.0), T))[:n2])

    for t in np.linspace(0, T, 33):
        d = symplectic_defect(phi(t))
        if d > tol:
            raise IntegrationError(f"symplectic drift {d:.2e} at t={t:.6g}", worst_time=float(t))
    return SymplecticPath(phi, T, n, generator=gen, i_invariant=True)


def xi_frame(model: HypersurfaceModel, z) -> np.ndarray:
    """Symplectic frame of the contact plane at ``z`` (``n = 2``).

    Uses ``w = (-conj z2, conj z1)`` and ``i w``, projected onto the
    symplectic complement of ``span{z, X_H(z)}``. On ``{p = 0}`` the first
    vector is real and the second imaginary.
    """
    if model.n != 2:
        raise PreconditionError("the contact-plane frame is implemented for n = 2")
    z = np.asarray(z, dtype=float)
    q, p = z[:2], z[2:]
    zc = q + 1j * p
    w = np.array([-np.conj(zc[1]), np.conj(zc[0])])
    e1 = np.r_[w.real, w.imag]
    iw = 1j * w
    e2 = np.r_[iw.real, iw.imag]
    J = J0(2)
    om = lambda u, v: float((J @ u) @ v)  # noqa: E731
    X = model.X(z)
    ozx = om(z, X)

    def proj(v):
        return v - (om(v, X) * z - om(v, z) * X) / ozx

    e1, e2 = proj(e1), proj(e2)
    s = om(e1, e2)
    if s <= 0:
        raise InvariantError("contact-plane frame lost its orientation")
    r = np.sqrt(s)
    return np.column_stack([e1 / r, e2 / r])


def reduced_path(model: HypersurfaceModel, chord: ReebChord, Phi: Optional[SymplecticPath] = None,
                 h: float = 1e-6) -> SymplecticPath:
    """The linearized flow restricted to the contact planes (``2 x 2``)."""
    Phi = Phi or linearized_flow(model, chord)
    T = chord.T
    J = J0(2)
    traj = chord.trajectory
    E0 = xi_frame(model, chord.start)

    def coords(E, v):
        # coordinates of v in the symplectic basis E = [e1, e2]
        return np.array([(J @ v) @ E[:, 1], (J @ E[:, 0]) @ v])

    def phi(t):
        t = min(max(t, 0.0), T)
        E = xi_frame(model, traj(t))
        M = Phi(t) @ E0
        return np.column_stack([coords(E, M[:, 0]), coords(E, M[:, 1])])

    J1 = J0(1)

    def gen(t):
        a, b = max(t - h, 0.0), min(t + h, T)
        dP = (phi(b) - phi(a)) / (b - a)
        S = -J1 @ dP @ np.linalg.inv(phi(t))
        return (S + S.T) / 2

    return SymplecticPath(phi, T, 1, generator=gen, i_invariant=True)


def chord_path(model: HypersurfaceModel, chord: ReebChord, label: str = "c") -> ChordPath:
    """Ambient chord path, with the reduced one attached when ``n = 2``."""
    Phi = linearized_flow(model, chord)
    red = None
    if model.n == 2:
        red = ChordPath(reduced_path(model, chord, Phi), eta_dim=0, label=label)
    return ChordPath(Phi, eta_dim=1, reduced=red, label=label)


@dataclass
class ChordIndices:
    mu_I: HalfInt
    mu_minus_I: HalfInt
    convex_along: bool
    regular: bool
    route: str

    def to_dict(self) -> dict:
        return {"mu_I": str(self.mu_I), "mu_minus_I": str(self.mu_minus_I),
                "convex_along": self.convex_along, "regular": self.regular, "route": self.route}


def chord_indices(model: HypersurfaceModel, chord: ReebChord, *, N_grid: int = 1024,
                  cp: Optional[ChordPath] = None) -> ChordIndices:
    """``mu_I`` and ``mu_{-I}`` from the ambient linearized flow.

    Crossing forms are ``<v, Hess H(c(t)) v>``. A degenerate crossing (only
    possible off the convex regime) switches to the spectral definition on
    the reduced path.
    """
    cp = cp or chord_path(model, chord)
    Phi = cp.Phi
    ts = np.linspace(0, chord.T, 65)
    convex_along = all(np.linalg.eigvalsh(Phi.generator(t)).min() > 0 for t in ts)
    n = model.n
    L0, L1 = LagrangianFrame.horizontal(n), LagrangianFrame.vertical(n)
    try:
        mu0 = rs_index(LagrangianPath.from_symplectic(Phi, L0), L0)
        mu1 = rs_index(LagrangianPath.from_symplectic(Phi, L1), L1)
        return ChordIndices(mu0, mu1, convex_along, True, "ambient")
    except DegenerateCrossingError:
        if cp.reduced is None:
            raise
        S = SymmetricMatrixPath(cp.reduced.Phi.generator, chord.T, 1)
        mu0 = mu_spectral(S, REAL, N_grid=N_grid, allow_degenerate=True)
        mu1 = mu_spectral(S, IMAG, N_grid=N_grid, allow_degenerate=True)
        return ChordIndices(mu0, mu1, convex_along, False, "spectral")


def reduced_indices(model: HypersurfaceModel, chord: ReebChord, cp: Optional[ChordPath] = None):
    """``(mu_I, mu_{-I})`` on the contact-plane path (``n = 2``)."""
    cp = cp or chord_path(model, chord)
    if cp.reduced is None:
        raise PreconditionError("reduced route needs n = 2")
    P = cp.reduced.Phi
    L0, L1 = LagrangianFrame.horizontal(1), LagrangianFrame.vertical(1)
    # the finite-difference generator is not exact; use chart crossing forms
    P = SymplecticPath(P.phi, P.T, 1)
    return (rs_index(LagrangianPath.from_symplectic(P, L0), L0),
            rs_index(LagrangianPath.from_symplectic(P, L1), L1))


@dataclass
class ConvexityReport:
    n: int
    passed: bool
    chords: List[dict]
    violations: List[str]

    def to_dict(self) -> dict:
        return {"n": self.n, "passed": self.passed, "chords": self.chords,
                "violations": self.violations}


def dynamical_convexity_check(model: HypersurfaceModel, chords: Sequence[ReebChord],
                              ell_max: int = 10) -> ConvexityReport:
    """Check ``mu_I, mu_{-I} >= (n+1)/2`` and strict index increase up to ``ell_max``.

    Raises
    ------
    PreconditionError
        If ``n < 2``.
    """
    n = model.n
    if n < 2:
        raise PreconditionError("dynamical convexity needs n >= 2")
    bound = HalfInt(n + 1)
    rows, bad = [], []
    for i, ch in enumerate(chords):
        label = f"c{i + 1}"
        cp = chord_path(model, ch, label)
        idx = chord_indices(model, ch, cp=cp)
        row = {"label": label, "T": ch.T, **idx.to_dict()}
        ok = idx.mu_I >= bound and idx.mu_minus_I >= bound
        if not ok:
            bad.append(f"{label}: index below (n+1)/2")
        if idx.route == "ambient":
            seq = iterate_indices(cp, ell_max)
            row["iterates"] = [str(s) for s in seq]
            inc = all(b > a for a, b in zip(seq, seq[1:]))
            row["strict_increase"] = inc
            if not inc:
                bad.append(f"{label}: iterate indices not strictly increasing")
        else:
            row["strict_increase"] = None
        row["passed"] = ok and row["strict_increase"] is not False
        rows.append(row)
    return ConvexityReport(n=n, passed=not bad, chords=rows, violations=bad)
