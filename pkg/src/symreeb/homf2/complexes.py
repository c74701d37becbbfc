"""Chain complexes over F_2, Z_2-complex structures and their equivariant complexes.

A Z_2-complex carries maps ``phi_j`` of degree ``j - 1`` with ``phi_0`` the
boundary and ``sum_{i+j=k} phi_i phi_j = 0``. The equivariant complex over
``F_2[w]/(w^{N+1})`` has differential

    d(w^l x) = sum_{j=0}^{l} w^{l-j} phi_j(x).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..errors import ComplexInvariantError, DimensionError, RelationError
from . import f2


# ---------------------------------------------------------------------------
# graded chain data in a single total basis


class GradedChains:
    """A differential on a total basis with a degree per basis vector.

    ``D`` lowers degree by one. Blocks ``D_k : C_k -> C_{k-1}`` are cut out
    on demand.
    """

    def __init__(self, D: np.ndarray, degree: np.ndarray):
        self.D = f2.to_f2(D)
        self.degree = np.asarray(degree, dtype=int)
        n = self.degree.size
        if self.D.shape != (n, n):
            raise DimensionError(f"differential has shape {self.D.shape}, expected {(n, n)}")
        if n > f2.MAX_DIM:
            raise DimensionError(f"total dimension {n} exceeds {f2.MAX_DIM}")
        self._idx: Dict[int, np.ndarray] = {}

    def idx(self, k: int) -> np.ndarray:
        if k not in self._idx:
            self._idx[k] = np.flatnonzero(self.degree == k)
        return self._idx[k]

    @property
    def degrees(self) -> List[int]:
        return sorted(set(self.degree.tolist()))

    def block(self, k: int) -> np.ndarray:
        return self.D[np.ix_(self.idx(k - 1), self.idx(k))]

    def check_square_zero(self) -> None:
        sq = f2.matmul(self.D, self.D)
        if sq.any():
            r, c = np.argwhere(sq)[0]
            raise ComplexInvariantError(
                f"d o d != 0: entry ({r}, {c}) in degree {self.degree[c]} -> {self.degree[c] - 2}")
        bad = np.argwhere(self.D)
        if bad.size:
            rows, cols = bad[:, 0], bad[:, 1]
            wrong = self.degree[rows] != self.degree[cols] - 1
            if wrong.any():
                i = np.flatnonzero(wrong)[0]
                raise ComplexInvariantError(
                    f"differential entry ({rows[i]}, {cols[i]}) does not lower degree by one")


class HomologyData:
    """Cycle representatives of a homology basis in every degree."""

    def __init__(self, chains: GradedChains):
        self.chains = chains
        self.reps: Dict[int, np.ndarray] = {}
        self.bounds: Dict[int, np.ndarray] = {}
        for k in chains.degrees:
            Z = f2.nullspace(chains.block(k))
            B = f2.column_basis(chains.block(k + 1))
            keep = f2.independent_extension(B, Z)
            self.reps[k] = Z[:, keep]
            self.bounds[k] = B

    @property
    def betti(self) -> Dict[int, int]:
        return {k: v.shape[1] for k, v in self.reps.items()}

    def coords(self, k: int, z: np.ndarray) -> np.ndarray:
        """Coordinates of the class of the cycle(s) ``z`` in the basis ``reps[k]``."""
        R = self.reps.get(k)
        if R is None:
            return f2.zeros(0, 1 if z.ndim == 1 else z.shape[1])
        B = self.bounds[k]
        x = f2.solve(np.hstack([B, R]), z)
        if x is None:
            raise ComplexInvariantError(f"vector in degree {k} is not a cycle")
        return x[B.shape[1]:]


def _betti(chains: GradedChains) -> Dict[int, int]:
    out = {}
    for k in chains.degrees:
        n = chains.idx(k).size
        out[k] = n - f2.rank(chains.block(k)) - f2.rank(chains.block(k + 1))
    return out


# ---------------------------------------------------------------------------
# complexes


def _as_matrix(M, shape) -> np.ndarray:
    if M is None:
        return f2.zeros(*shape)
    A = f2.to_f2(M)
    if A.ndim != 2 or A.shape != shape:
        raise DimensionError(f"matrix has shape {A.shape}, expected {shape}")
    return A


@dataclass
class F2Complex:
    """Graded F_2 chain complex.

    Parameters
    ----------
    dims
        ``{q: dim C_q}``.
    boundary
        ``{q: matrix of d_q : C_q -> C_{q-1}}``; missing entries are zero.
    """

    dims: Dict[int, int]
    boundary: Dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.dims = {int(q): int(d) for q, d in self.dims.items() if int(d) > 0}
        if sum(self.dims.values()) > f2.MAX_DIM:
            raise DimensionError(f"total dimension exceeds {f2.MAX_DIM}")
        bd = {}
        for q, M in self.boundary.items():
            q = int(q)
            A = _as_matrix(M, (self.dim(q - 1), self.dim(q)))
            if A.any():
                bd[q] = A
        self.boundary = bd
        for q in self.dims:
            if f2.matmul(self.d(q - 1), self.d(q)).any():
                raise ComplexInvariantError(f"d_{q - 1} o d_{q} != 0")

    def dim(self, q: int) -> int:
        return self.dims.get(q, 0)

    def d(self, q: int) -> np.ndarray:
        M = self.boundary.get(q)
        return M if M is not None else f2.zeros(self.dim(q - 1), self.dim(q))

    @property
    def degrees(self) -> List[int]:
        return sorted(self.dims)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def offsets(self) -> Dict[int, int]:
        off, o = {}, 0
        for q in self.degrees:
            off[q] = o
            o += self.dims[q]
        return off

    def degree_vector(self) -> np.ndarray:
        return np.concatenate([np.full(self.dims[q], q) for q in self.degrees]) if self.dims \
            else np.zeros(0, dtype=int)

    def total(self, maps: Mapping[int, np.ndarray], shift: int) -> np.ndarray:
        """Assemble per-degree maps ``C_q -> C_{q+shift}`` into one matrix."""
        off, n = self.offsets(), self.total_dim
        M = f2.zeros(n, n)
        for q, A in maps.items():
            if q in off and q + shift in off and A.size:
                M[off[q + shift]:off[q + shift] + self.dims[q + shift], off[q]:off[q] + self.dims[q]] = A
        return M

    def chains(self) -> GradedChains:
        return GradedChains(self.total(self.boundary, -1), self.degree_vector())

    def homology(self) -> Dict[int, int]:
        """Betti numbers ``dim ker d_q - rank d_{q+1}``."""
        return homology(self)

    def subcomplex(self, keep: Mapping[int, Sequence[int]]) -> "F2Complex":
        return _restrict(self, keep, sub=True)

    def quotient(self, keep: Mapping[int, Sequence[int]]) -> "F2Complex":
        return _restrict(self, keep, sub=False)


def _complement(dims: Mapping[int, int], keep: Mapping[int, Sequence[int]]) -> Dict[int, List[int]]:
    return {q: [i for i in range(d) if i not in set(keep.get(q, ()))] for q, d in dims.items()}


def _check_closed(maps: Mapping[int, np.ndarray], shift: int, keep, dims, what: str) -> None:
    out = _complement(dims, keep)
    for q, A in maps.items():
        rows, cols = out.get(q + shift, []), list(keep.get(q, ()))
        if rows and cols and A[np.ix_(rows, cols)].any():
            raise ComplexInvariantError(f"{what} does not preserve the subcomplex in degree {q}")


def _restrict(C: F2Complex, keep: Mapping[int, Sequence[int]], sub: bool) -> F2Complex:
    keep = {int(q): sorted(set(v)) for q, v in keep.items()}
    _check_closed(C.boundary, -1, keep, C.dims, "boundary")
    sel = keep if sub else _complement(C.dims, keep)
    dims = {q: len(sel.get(q, [])) for q in C.dims}
    bd = {q: A[np.ix_(sel.get(q - 1, []), sel.get(q, []))] for q, A in C.boundary.items()}
    return F2Complex(dims, bd)


def homology(C: F2Complex) -> Dict[int, int]:
    """Graded F_2 Betti numbers of ``C``.

    Raises
    ------
    ComplexInvariantError
        If ``d o d != 0``.
    """
    for q in C.dims:
        if f2.matmul(C.d(q - 1), C.d(q)).any():
            raise ComplexInvariantError(f"d_{q - 1} o d_{q} != 0")
    out = {}
    for q in C.degrees:
        out[q] = C.dim(q) - f2.rank(C.d(q)) - f2.rank(C.d(q + 1))
    return out


# ---------------------------------------------------------------------------
# Z_2-complex structures


@dataclass
class Z2ComplexStructure:
    """A complex with maps ``phi_j`` of degree ``j - 1``.

    ``phi[j - 1]`` holds ``phi_j`` as ``{q: matrix C_q -> C_{q+j-1}}`` for
    ``j >= 1``; ``phi_0`` is the boundary of ``base``. Maps past the end of
    the list are zero.
    """

    base: F2Complex
    phi: List[Dict[int, np.ndarray]] = field(default_factory=list)

    def __post_init__(self):
        clean = []
        for j, maps in enumerate(self.phi, start=1):
            cm = {}
            for q, M in maps.items():
                q = int(q)
                A = _as_matrix(M, (self.base.dim(q + j - 1), self.base.dim(q)))
                if A.any():
                    cm[q] = A
            clean.append(cm)
        while clean and not clean[-1]:
            clean.pop()
        self.phi = clean

    @classmethod
    def from_involution(cls, base: F2Complex, sigma: Mapping[int, np.ndarray]) -> "Z2ComplexStructure":
        """Cellular action ``sigma``: ``phi_1 = 1 + sigma`` and ``phi_j = 0`` for ``j >= 2``."""
        s = {q: _as_matrix(sigma.get(q), (base.dim(q), base.dim(q))) if q in sigma else f2.eye(base.dim(q))
             for q in base.dims}
        for q in base.dims:
            if not np.array_equal(f2.matmul(s[q], s[q]), f2.eye(base.dim(q))):
                raise ComplexInvariantError(f"sigma is not an involution in degree {q}")
            if q - 1 in s and not np.array_equal(f2.matmul(base.d(q), s[q]), f2.matmul(s[q - 1], base.d(q))):
                raise ComplexInvariantError(f"sigma is not a chain map in degree {q}")
        phi1 = {q: f2.to_f2(s[q] + f2.eye(base.dim(q))) for q in base.dims}
        return cls(base, [phi1])

    def phi_map(self, j: int) -> Dict[int, np.ndarray]:
        if j == 0:
            return self.base.boundary
        return self.phi[j - 1] if j <= len(self.phi) else {}

    def phi_total(self, j: int) -> np.ndarray:
        return self.base.total(self.phi_map(j), j - 1)

    def relation(self, k: int) -> np.ndarray:
        """``sum_{i+j=k} phi_i o phi_j`` on the total basis."""
        n = self.base.total_dim
        acc = f2.zeros(n, n)
        for i in range(k + 1):
            acc ^= f2.matmul(self.phi_total(i), self.phi_total(k - i))
        return acc

    def check_relations(self, order: int) -> None:
        """Verify the relation of every order ``k <= order``.

        Raises
        ------
        RelationError
            Naming the first failing order and the nonzero composites.
        """
        for k in range(order + 1):
            if self.relation(k).any():
                terms = [f"phi_{i} o phi_{k - i}" for i in range(k + 1)
                         if f2.matmul(self.phi_total(i), self.phi_total(k - i)).any()]
                raise RelationError(
                    f"relation of order {k} fails; nonzero composites: {', '.join(terms)}", order=k)

    def _select(self, keep, sub: bool) -> "Z2ComplexStructure":
        keep = {int(q): sorted(set(v)) for q, v in keep.items()}
        base = _restrict(self.base, keep, sub)
        sel = keep if sub else _complement(self.base.dims, keep)
        phis = []
        for j, maps in enumerate(self.phi, start=1):
            _check_closed(maps, j - 1, keep, self.base.dims, f"phi_{j}")
            phis.append({q: A[np.ix_(sel.get(q + j - 1, []), sel.get(q, []))] for q, A in maps.items()})
        return Z2ComplexStructure(base, phis)

    def subcomplex(self, keep: Mapping[int, Sequence[int]]) -> "Z2ComplexStructure":
        """Invariant subcomplex spanned by the basis vectors ``keep[q]``."""
        return self._select(keep, True)

    def quotient(self, keep: Mapping[int, Sequence[int]]) -> "Z2ComplexStructure":
        return self._select(keep, False)

    # -- file format ---------------------------------------------------------

    def to_dict(self) -> dict:
        def sparse(A):
            return [[int(r), int(c)] for r, c in np.argwhere(A)]

        return {
            "dims": {str(q): d for q, d in self.base.dims.items()},
            "boundary": {str(q): sparse(A) for q, A in self.base.boundary.items()},
            "phi": {str(j): {str(q): sparse(A) for q, A in maps.items()}
                    for j, maps in enumerate(self.phi, start=1)},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Z2ComplexStructure":
        """Build from ``{"dims", "boundary", "phi"}`` with sparse ``[row, col]`` entry lists."""
        unknown = set(data) - {"dims", "boundary", "phi"}
        if unknown:
            raise ValueError(f"unknown keys in complex description: {sorted(unknown)}")
        dims = {int(q): int(d) for q, d in data["dims"].items()}

        def dense(entries, r, c):
            A = f2.zeros(r, c)
            for i, j in entries:
                if not (0 <= i < r and 0 <= j < c):
                    raise DimensionError(f"entry ({i}, {j}) outside a {r}x{c} matrix")
                A[i, j] ^= 1
            return A

        bd = {int(q): dense(e, dims.get(int(q) - 1, 0), dims.get(int(q), 0))
              for q, e in data.get("boundary", {}).items()}
        base = F2Complex(dims, bd)
        phi_in = {int(j): m for j, m in data.get("phi", {}).items()}
        top = max(phi_in, default=0)
        if any(j < 1 for j in phi_in):
            raise ValueError("phi indices start at 1")
        phis = []
        for j in range(1, top + 1):
            maps = phi_in.get(j, {})
            phis.append({int(q): dense(e, dims.get(int(q) + j - 1, 0), dims.get(int(q), 0))
                         for q, e in maps.items()})
        return cls(base, phis)

    @classmethod
    def load(cls, path) -> "Z2ComplexStructure":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# equivariant complex


class EquivariantComplex:
    """``F_2[w]/(w^{N+1}) (x) C`` with the equivariant differential.

    Basis vector ``w^l (x) e_i`` sits at position ``l * dim C + i`` with
    degree ``l + deg e_i`` and filtration ``l``.
    """

    def __init__(self, structure: Z2ComplexStructure, N: int):
        if N < 0:
            raise ValueError("truncation N must be non-negative")
        self.structure = structure
        self.N = int(N)
        C = structure.base
        n = C.total_dim
        if n * (N + 1) > f2.MAX_DIM:
            raise DimensionError(f"equivariant complex of dimension {n * (N + 1)} exceeds {f2.MAX_DIM}")
        self.base_dim = n
        base_deg = C.degree_vector()
        self.filtration = np.repeat(np.arange(N + 1), n)
        self.base_index = np.tile(np.arange(n), N + 1)
        degree = self.filtration + base_deg[self.base_index]
        D = f2.zeros(n * (N + 1), n * (N + 1))
        phis = [structure.phi_total(j) for j in range(N + 1)]
        for l in range(N + 1):
            for j in range(l + 1):
                if phis[j].any():
                    D[(l - j) * n:(l - j + 1) * n, l * n:(l + 1) * n] ^= phis[j]
        self.chains = GradedChains(D, degree)
        self.chains.check_square_zero()
        self.min_base_degree = min(C.degrees) if C.dims else 0

    @property
    def D(self) -> np.ndarray:
        return self.chains.D

    @property
    def degree(self) -> np.ndarray:
        return self.chains.degree

    @property
    def stable_top(self) -> int:
        """Highest degree unaffected by the truncation."""
        return self.N + self.min_base_degree - 1

    def homology(self) -> Dict[int, int]:
        return _betti(self.chains)

    def component(self, l: int, v: np.ndarray) -> np.ndarray:
        """The ``w^l`` component of a vector given on the total basis."""
        n = self.base_dim
        return v[l * n:(l + 1) * n]


def build_equivariant(Z: Z2ComplexStructure, N: int) -> EquivariantComplex:
    """Assemble the truncated equivariant complex.

    Raises
    ------
    RelationError
        If a relation of order ``<= N`` fails.
    ComplexInvariantError
        If the assembled differential does not square to zero.
    """
    Z.check_relations(N)
    return EquivariantComplex(Z, N)


def equivariant_homology(Z: Z2ComplexStructure, N: int) -> Dict[int, int]:
    return build_equivariant(Z, N).homology()


# ---------------------------------------------------------------------------
# long exact sequence of a pair


@dataclass
class LongExactSequence:
    """``... -> H_k(A) -> H_k(X) -> H_k(X, A) -> H_{k-1}(A) -> ...`` in descending ``k``."""

    terms: List[Tuple[str, int, int]]  # (space, degree, dim)
    ranks: List[int]  # rank of the map leaving each term

    @property
    def exact(self) -> bool:
        incoming = [0] + self.ranks[:-1]
        return all(inc + out == dim for (_, _, dim), inc, out in zip(self.terms, incoming, self.ranks))

    @property
    def alternating_sum(self) -> int:
        return sum((-1) ** i * d for i, (_, _, d) in enumerate(self.terms))


def long_exact_sequence(chains: GradedChains, sub_mask: np.ndarray) -> LongExactSequence:
    """Homology sequence of the pair (total complex, subcomplex on ``sub_mask``)."""
    sub_mask = np.asarray(sub_mask, dtype=bool)
    D, deg = chains.D, chains.degree
    a_idx, q_idx = np.flatnonzero(sub_mask), np.flatnonzero(~sub_mask)
    if D[np.ix_(q_idx, a_idx)].any():
        raise ComplexInvariantError("sub_mask does not span a subcomplex")
    A = GradedChains(D[np.ix_(a_idx, a_idx)], deg[a_idx])
    Q = GradedChains(D[np.ix_(q_idx, q_idx)], deg[q_idx])
    hA, hX, hQ = HomologyData(A), HomologyData(chains), HomologyData(Q)
    # positions of sub/quotient degree-k coordinates inside X's degree-k block
    def split(k):
        ix = chains.idx(k)
        m = sub_mask[ix]
        return np.flatnonzero(m), np.flatnonzero(~m)

    terms, ranks = [], []
    degrees = sorted(set(deg.tolist()), reverse=True)
    for k in degrees:
        sa, sq = split(k)
        RA = hA.reps.get(k, f2.zeros(len(sa), 0))
        RX = hX.reps.get(k, f2.zeros(len(sa) + len(sq), 0))
        RQ = hQ.reps.get(k, f2.zeros(len(sq), 0))
        # i_*
        emb = f2.zeros(len(sa) + len(sq), RA.shape[1])
        emb[sa] = RA
        i_star = hX.coords(k, emb) if RA.shape[1] else f2.zeros(RX.shape[1], 0)
        # j_*
        j_star = hQ.coords(k, RX[sq]) if RX.shape[1] else f2.zeros(RQ.shape[1], 0)
        # delta
        if RQ.shape[1] and chains.idx(k - 1).size:
            lift = f2.zeros(len(sa) + len(sq), RQ.shape[1])
            lift[sq] = RQ
            img = f2.matmul(chains.block(k), lift)
            sa1, sq1 = split(k - 1)
            if img[sq1].any():
                raise ComplexInvariantError("connecting map lands outside the subcomplex")
            delta = hA.coords(k - 1, img[sa1])
        else:
            delta = f2.zeros(hA.reps.get(k - 1, f2.zeros(0, 0)).shape[1], RQ.shape[1])
        terms += [("A", k, RA.shape[1]), ("X", k, RX.shape[1]), ("X/A", k, RQ.shape[1])]
        ranks += [f2.rank(i_star), f2.rank(j_star), f2.rank(delta)]
    return LongExactSequence(terms, ranks)
