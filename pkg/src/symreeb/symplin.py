"""Symplectic linear algebra on R^{2m} with coordinates (q, p).

Conventions used throughout the package:

* ``J0 = [[0, -I], [I, 0]]`` and ``omega(u, v) = <J0 u, v>``.
* ``Lambda0 = R^m x 0`` (horizontal) and ``Lambda1 = 0 x R^m`` (vertical).
* The anti-symplectic involution is ``I = diag(I_m, -I_m)``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .errors import DimensionError, IndeterminateRankError, InvariantError

DEFAULT_TOL = 1e-9
# singular values within this factor of the threshold are ambiguous
RANK_BAND = 10.0


# --------------------------------------------------------------------------
# exact half-integers


@functools.total_ordering
@dataclass(frozen=True)
class HalfInt:
    """Exact element of (1/2)Z, stored as twice its value.

    >>> HalfInt(3) + HalfInt.from_value(1)
    HalfInt('5/2')
    """

    twice: int

    def __post_init__(self):
        if isinstance(self.twice, bool) or not isinstance(self.twice, (int, np.integer)):
            raise TypeError(f"HalfInt numerator must be an int, got {type(self.twice).__name__}")
        object.__setattr__(self, "twice", int(self.twice))

    @classmethod
    def from_value(cls, v) -> "HalfInt":
        """Build from an int, a Fraction, a HalfInt or a string like ``"3/2"``."""
        if isinstance(v, HalfInt):
            return v
        if isinstance(v, str):
            v = Fraction(v.strip())
        if isinstance(v, float):
            if not (2 * v).is_integer():
                raise ValueError(f"{v} is not a half-integer")
            return cls(int(2 * v))
        f = Fraction(v)
        t = 2 * f
        if t.denominator != 1:
            raise ValueError(f"{v} is not a half-integer")
        return cls(int(t))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __add__(self, other):
        if isinstance(other, (int, np.integer)) and not isinstance(other, bool):
            other = HalfInt(2 * int(other))
        if not isinstance(other, HalfInt):
            return NotImplemented
        return HalfInt(self.twice + other.twice)

    __radd__ = __add__

    def __neg__(self):
        return HalfInt(-self.twice)

    def __sub__(self, other):
        if isinstance(other, (int, np.integer)) and not isinstance(other, bool):
            other = HalfInt(2 * int(other))
        if not isinstance(other, HalfInt):
            return NotImplemented
        return HalfInt(self.twice - other.twice)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k):
        if isinstance(k, (int, np.integer)) and not isinstance(k, bool):
            return HalfInt(self.twice * int(k))
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, HalfInt):
            return self.twice == other.twice
        if isinstance(other, (int, np.integer, Fraction)) and not isinstance(other, bool):
            return Fraction(self.twice, 2) == other
        return NotImplemented

    def __hash__(self):
        return hash(("HalfInt", self.twice))

    def __lt__(self, other):
        if isinstance(other, HalfInt):
            return self.twice < other.twice
        if isinstance(other, (int, np.integer, Fraction, float)):
            return Fraction(self.twice, 2) < other
        return NotImplemented

    def __float__(self):
        return self.twice / 2

    def __str__(self):
        return str(self.twice // 2) if self.twice % 2 == 0 else f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInt('{self}')"


ZERO = HalfInt(0)


# --------------------------------------------------------------------------
# forms and matrices


def _half_dim(n: int) -> int:
    if n % 2:
        raise DimensionError(f"expected an even dimension, got {n}")
    return n // 2


def J0(m: int) -> np.ndarray:
    """Standard complex structure on R^{2m}."""
    Z = np.zeros((m, m))
    I = np.eye(m)
    return np.block([[Z, -I], [I, Z]])


def anti_involution(m: int) -> np.ndarray:
    """The anti-symplectic involution ``diag(I_m, -I_m)``."""
    return np.diag(np.r_[np.ones(m), -np.ones(m)])


def omega(u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    m = _half_dim(u.shape[0])
    return float((J0(m) @ u) @ v)


@dataclass(frozen=True)
class SymplecticForm:
    m: int

    @property
    def J0(self) -> np.ndarray:
        return J0(self.m)

    def __call__(self, u, v) -> float:
        return omega(u, v)


def _square_even(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    _half_dim(M.shape[0])
    return M


def symplectic_defect(M) -> float:
    """Sup-norm of ``M^T J0 M - J0``."""
    M = _square_even(M)
    J = J0(M.shape[0] // 2)
    return float(np.max(np.abs(M.T @ J @ M - J)))


def is_symplectic(M, tol: float = 1e-10) -> bool:
    """True iff ``|M^T J0 M - J0|_inf <= tol``.

    Raises
    ------
    DimensionError
        If ``M`` is not square of even size.
    """
    return symplectic_defect(M) <= tol


def is_anti_symplectic(M, tol: float = 1e-10) -> bool:
    M = _square_even(M)
    J = J0(M.shape[0] // 2)
    return float(np.max(np.abs(M.T @ J @ M + J))) <= tol


def _scale_tol(M, tol):
    # a symplectic matrix of norm s has defect of order eps * s^2
    return tol * max(1.0, float(np.max(np.abs(M)))) ** 2


@dataclass(frozen=True, eq=False)
class SymplecticMatrix:
    """A validated element of Sp(2m)."""

    M: np.ndarray
    tol: float = 1e-10
    m: int = field(init=False)

    def __post_init__(self):
        M = _square_even(self.M).copy()
        M.setflags(write=False)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "m", M.shape[0] // 2)
        d = symplectic_defect(M)
        if d > _scale_tol(M, self.tol):
            raise InvariantError(f"matrix is not symplectic (defect {d:.3e})")

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.M, dtype=dtype)

    def __matmul__(self, other):
        if isinstance(other, SymplecticMatrix):
            return SymplecticMatrix(self.M @ other.M, tol=max(self.tol, other.tol))
        return self.M @ np.asarray(other)


def symplectic_inverse(M, tol: float = 1e-10) -> np.ndarray:
    """Inverse of a symplectic matrix via ``-J0 M^T J0``.

    Raises
    ------
    InvariantError
        If ``M`` fails the symplecticity check (tolerance scaled by ``|M|^2``).
    """
    if isinstance(M, SymplecticMatrix):
        M = M.M
    M = _square_even(M)
    d = symplectic_defect(M)
    if d > _scale_tol(M, tol):
        raise InvariantError(f"matrix is not symplectic (defect {d:.3e})")
    J = J0(M.shape[0] // 2)
    return -J @ M.T @ J


def block_decompose(M):
    """Split ``M`` as ``[[X, Y], [Z, W]]`` along ``Lambda0 + Lambda1``."""
    if isinstance(M, SymplecticMatrix):
        M = M.M
    M = _square_even(M)
    m = M.shape[0] // 2
    return M[:m, :m].copy(), M[:m, m:].copy(), M[m:, :m].copy(), M[m:, m:].copy()


def block_assemble(X, Y, Z, W) -> np.ndarray:
    return np.block([[X, Y], [Z, W]])


def direct_sum(A, B) -> np.ndarray:
    """Symplectic direct sum of matrices on R^{2a} and R^{2b} in (q, p) order."""
    A = _square_even(A)
    B = _square_even(B)
    a, b = A.shape[0] // 2, B.shape[0] // 2
    XA, YA, ZA, WA = block_decompose(A)
    XB, YB, ZB, WB = block_decompose(B)

    def ds(P, Q):
        out = np.zeros((a + b, a + b))
        out[:a, :a] = P
        out[a:, a:] = Q
        return out

    return block_assemble(ds(XA, XB), ds(YA, YB), ds(ZA, ZB), ds(WA, WB))


def rotation(theta: float, m: int = 1) -> np.ndarray:
    """``exp(theta J0)``: counterclockwise rotation in every (q_j, p_j) plane."""
    c, s = np.cos(theta), np.sin(theta)
    I = np.eye(m)
    return np.block([[c * I, -s * I], [s * I, c * I]])


def random_symplectic(m: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random element of Sp(2m) as a product of shears and a unitary."""
    def sym(k):
        A = rng.standard_normal((k, k)) * scale
        return (A + A.T) / 2

    I = np.eye(m)
    Z = np.zeros((m, m))
    lower = np.block([[I, Z], [sym(m), I]])
    upper = np.block([[I, sym(m)], [Z, I]])
    # unitary part from a complex QR
    G = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    Q, _ = np.linalg.qr(G)
    U = np.block([[Q.real, -Q.imag], [Q.imag, Q.real]])
    return lower @ U @ upper


# --------------------------------------------------------------------------
# Lagrangian frames


def _orthonormalize(F: np.ndarray) -> np.ndarray:
    Q, R = np.linalg.qr(F)
    # fix signs so the canonical frame is deterministic
    s = np.sign(np.diag(R))
    s[s == 0] = 1.0
    return Q * s


@dataclass(frozen=True, eq=False)
class LagrangianFrame:
    """A ``2m x m`` frame spanning a Lagrangian subspace.

    The stored frame ``F`` always has orthonormal columns. Two frames span the
    same subspace iff :func:`intersection_dimension` returns ``m``.
    """

    F: np.ndarray
    tol: float = 1e-8
    canonical: bool = field(init=False, default=True)

    def __post_init__(self):
        F = np.asarray(self.F, dtype=float)
        if F.ndim != 2 or F.shape[0] != 2 * F.shape[1]:
            raise DimensionError(f"a Lagrangian frame must be 2m x m, got {F.shape}")
        m = F.shape[1]
        s = np.linalg.svd(F, compute_uv=False)
        if s[-1] <= 1e-12 * max(s[0], 1e-300):
            raise InvariantError("frame is rank deficient")
        Q = _orthonormalize(F)
        iso = float(np.max(np.abs(Q.T @ J0(m) @ Q))) if m else 0.0
        if iso > self.tol:
            raise InvariantError(f"frame is not isotropic (defect {iso:.3e})")
        Q.setflags(write=False)
        object.__setattr__(self, "F", Q)

    @property
    def m(self) -> int:
        return self.F.shape[1]

    @classmethod
    def horizontal(cls, m: int) -> "LagrangianFrame":
        """``Lambda0 = R^m x 0``."""
        return cls(np.vstack([np.eye(m), np.zeros((m, m))]))

    @classmethod
    def vertical(cls, m: int) -> "LagrangianFrame":
        """``Lambda1 = 0 x R^m``."""
        return cls(np.vstack([np.zeros((m, m)), np.eye(m)]))

    @classmethod
    def graph(cls, A) -> "LagrangianFrame":
        """Graph ``{(x, A x)}`` of a symmetric matrix."""
        A = np.atleast_2d(np.asarray(A, dtype=float))
        if A.shape[0] != A.shape[1]:
            raise DimensionError("graph matrix must be square")
        if not np.allclose(A, A.T, atol=1e-12 * max(1.0, np.abs(A).max())):
            raise InvariantError("graph matrix must be symmetric")
        return cls(np.vstack([np.eye(A.shape[0]), A]))

    def transform(self, M) -> "LagrangianFrame":
        """Image under a symplectic or anti-symplectic matrix."""
        M = np.asarray(M, dtype=float)
        return LagrangianFrame(M @ self.F, tol=self.tol)

    def complex_frame(self) -> np.ndarray:
        """Unitary ``X + iY`` representing the frame, ``F = [X; Y]``."""
        m = self.m
        return self.F[:m] + 1j * self.F[m:]

    def same_subspace(self, other: "LagrangianFrame", tol: float = DEFAULT_TOL) -> bool:
        return intersection_dimension(self, other, tol) == self.m


def as_frame(F) -> LagrangianFrame:
    return F if isinstance(F, LagrangianFrame) else LagrangianFrame(F)


def intersection_dimension(F1, F2, tol: float = DEFAULT_TOL) -> int:
    """Dimension of the intersection of two Lagrangian subspaces.

    Counts the singular values of the pairing ``F1^T J0 F2`` that fall below
    ``tol * sigma_ref`` where ``sigma_ref = 1`` for orthonormal frames.

    Raises
    ------
    IndeterminateRankError
        If a singular value lies in ``[tol / 10, tol * 10]``.
    """
    F1 = as_frame(F1)
    F2 = as_frame(F2)
    if F1.m != F2.m:
        raise DimensionError(f"half-dimensions differ: {F1.m} vs {F2.m}")
    m = F1.m
    if m == 0:
        return 0
    s = np.linalg.svd(F1.F.T @ J0(m) @ F2.F, compute_uv=False)
    ambiguous = (s > tol / RANK_BAND) & (s < tol * RANK_BAND)
    if np.any(ambiguous):
        raise IndeterminateRankError(
            f"singular value {s[ambiguous][0]:.3e} is within the ambiguity band of tol={tol:g}",
            singular_values=s,
        )
    return int(np.sum(s <= tol))


def intersection_basis(F1, F2, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns in R^{2m}) of ``span F1 ∩ span F2``.

    The basis is expressed as ``F2 @ c`` for null vectors ``c`` of the pairing.
    """
    F1 = as_frame(F1)
    F2 = as_frame(F2)
    k = intersection_dimension(F1, F2, tol)
    m = F1.m
    if k == 0:
        return np.zeros((2 * m, 0))
    _, _, Vt = np.linalg.svd(F1.F.T @ J0(m) @ F2.F)
    C = Vt[m - k:].T
    return F2.F @ C


# --------------------------------------------------------------------------
# symplectic paths


@dataclass(frozen=True, eq=False)
class SymplecticPath:
    """A path ``t -> Phi(t)`` in Sp(2m) on ``[0, T]``.

    Parameters
    ----------
    phi : callable
        ``phi(t)`` returns a ``2m x 2m`` matrix.
    T : float
        Final time.
    m : int
        Half-dimension.
    generator : callable, optional
        ``S(t)`` symmetric with ``dPhi/dt = J0 S(t) Phi``. Enables exact
        crossing forms.
    i_invariant : bool
        Whether ``S(t)`` commutes with the involution ``I``
        (i.e. ``I S I = S``), as for brake-orbit linearizations.
    """

    phi: Callable[[float], np.ndarray]
    T: float
    m: int
    generator: Optional[Callable[[float], np.ndarray]] = None
    i_invariant: bool = False

    def __call__(self, t: float) -> np.ndarray:
        return np.asarray(self.phi(t), dtype=float)

    def samples(self, ts) -> np.ndarray:
        return np.stack([self(t) for t in ts])

    @classmethod
    def constant_generator(cls, S, T: float = 1.0) -> "SymplecticPath":
        """``Phi(t) = expm(t J0 S)`` for a constant symmetric ``S``."""
        from scipy.linalg import expm

        S = np.asarray(S, dtype=float)
        m = _half_dim(S.shape[0])
        A = J0(m) @ S
        return cls(lambda t: expm(t * A), T, m, generator=lambda t: S,
                   i_invariant=bool(np.allclose(anti_involution(m) @ S @ anti_involution(m), S)))

    @classmethod
    def from_generator(cls, S: Callable[[float], np.ndarray], T: float, m: int,
                       rtol: float = 1e-12, atol: float = 1e-12) -> "SymplecticPath":
        """Integrate ``dPhi/dt = J0 S(t) Phi`` from the identity."""
        from scipy.integrate import solve_ivp

        J = J0(m)
        n = 2 * m

        def rhs(t, y):
            return (J @ S(t) @ y.reshape(n, n)).ravel()

        sol = solve_ivp(rhs, (0.0, T), np.eye(n).ravel(), method="DOP853",
                        rtol=rtol, atol=atol, dense_output=True)
        if not sol.success:
            from .errors import IntegrationError

            raise IntegrationError(sol.message)
        dense = sol.sol

        def phi(t):
            return dense(min(max(t, 0.0), T)).reshape(n, n)

        return cls(phi, T, m, generator=S)

    def endpoint(self) -> np.ndarray:
        return self(self.T)
