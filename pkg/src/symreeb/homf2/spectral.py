"""Spectral sequence of a finite filtered complex over F_2.

The differential lowers filtration weakly. With
``Z^r_p = {x in F_p : dx in F_{p-r}}`` the pages are

    E^r_p = Z^r_p / (Z^{r-1}_{p-1} + d Z^{r-1}_{p+r-1})

and ``d^r : E^r_{p,q} -> E^r_{p-r,q+r-1}`` is induced by ``d``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..errors import AssemblyError, ComplexInvariantError
from . import f2
from .complexes import EquivariantComplex, GradedChains, HomologyData, _betti

Key = Tuple[int, int]


@dataclass
class SSPage:
    """Page ``E^r``: dimensions keyed by ``(p, q)`` and the matrices of ``d^r``.

    ``d[(p, q)]`` maps ``E^r_{p,q}`` to ``E^r_{p-r,q+r-1}``; an empty ``d``
    with ``differentials_known=False`` means only the groups are known.
    """

    r: int
    dims: Dict[Key, int]
    d: Dict[Key, np.ndarray] = field(default_factory=dict)
    differentials_known: bool = True

    def dim(self, p: int, q: int) -> int:
        return self.dims.get((p, q), 0)

    def target(self, p: int, q: int) -> Key:
        return (p - self.r, q + self.r - 1)

    def total_dims(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for (p, q), v in self.dims.items():
            if v:
                out[p + q] = out.get(p + q, 0) + v
        return dict(sorted(out.items()))

    def is_zero(self) -> bool:
        return not any(self.dims.values())

    def check_d_squared(self) -> None:
        for (p, q), M in self.d.items():
            t = self.target(p, q)
            M2 = self.d.get(t)
            if M2 is not None and M.size and M2.size and f2.matmul(M2, M).any():
                raise ComplexInvariantError(f"d^{self.r} o d^{self.r} != 0 at ({p}, {q})")

    def next_dims(self) -> Dict[Key, int]:
        """``ker d^r / im d^r`` dimensions."""
        out = {}
        for (p, q), n in self.dims.items():
            M = self.d.get((p, q))
            ker = n - (f2.rank(M) if M is not None and M.size else 0)
            src = (p + self.r, q - self.r + 1)
            Min = self.d.get(src)
            im = f2.rank(Min) if Min is not None and Min.size else 0
            out[(p, q)] = ker - im
        return out

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "groups": [[p, q, v] for (p, q), v in sorted(self.dims.items()) if v],
            "differentials": [[p, q, M.astype(int).tolist()] for (p, q), M in sorted(self.d.items()) if M.any()],
            "differentials_known": self.differentials_known,
        }


class FilteredComplex:
    """Graded chains with an integer filtration level per basis vector."""

    def __init__(self, chains: GradedChains, filtration: np.ndarray):
        self.chains = chains
        self.filtration = np.asarray(filtration, dtype=int)
        D = chains.D
        rows, cols = np.nonzero(D)
        if np.any(self.filtration[rows] > self.filtration[cols]):
            raise ComplexInvariantError("differential raises filtration")
        self.p_min = int(self.filtration.min()) if self.filtration.size else 0
        self.p_max = int(self.filtration.max()) if self.filtration.size else 0
        self._z: Dict[Tuple[int, int, int], np.ndarray] = {}

    def Z(self, r: int, p: int, k: int) -> np.ndarray:
        """``Z^r_p`` in degree ``k`` as columns on the degree-``k`` block."""
        key = (r, p, k)
        if key in self._z:
            return self._z[key]
        ix = self.chains.idx(k)
        f_here = self.filtration[ix]
        cols = np.flatnonzero(f_here <= p)
        n = ix.size
        if cols.size == 0:
            out = f2.zeros(n, 0)
        else:
            iy = self.chains.idx(k - 1)
            rows = np.flatnonzero(self.filtration[iy] > p - r)
            sub = self.chains.D[np.ix_(iy[rows], ix[cols])]
            K = f2.nullspace(sub) if rows.size else f2.eye(cols.size)
            out = f2.zeros(n, K.shape[1])
            out[cols] = K
        self._z[key] = out
        return out

    def denominator(self, r: int, p: int, k: int) -> np.ndarray:
        Zlow = self.Z(r - 1, p - 1, k)
        Zhi = self.Z(r - 1, p + r - 1, k + 1)
        B = f2.matmul(self.chains.block(k + 1), Zhi) if Zhi.shape[1] else f2.zeros(Zlow.shape[0], 0)
        return f2.column_basis(np.hstack([Zlow, B]))

    def page_data(self, r: int, p: int, k: int):
        """Representatives of a basis of ``E^r_p`` in degree ``k`` and the denominator."""
        Zr = self.Z(r, p, k)
        den = self.denominator(r, p, k)
        keep = f2.independent_extension(den, Zr)
        return Zr[:, keep], den

    def differential(self, r: int, p: int, k: int, reps: np.ndarray) -> np.ndarray:
        tgt_reps, tgt_den = self.page_data(r, p - r, k - 1)
        if reps.shape[1] == 0 or tgt_reps.shape[1] == 0:
            return f2.zeros(tgt_reps.shape[1], reps.shape[1])
        y = f2.matmul(self.chains.block(k), reps)
        x = f2.solve(np.hstack([tgt_den, tgt_reps]), y)
        if x is None:
            raise AssemblyError(f"d^{r} image from filtration {p}, degree {k} is not in Z^{r}_{p - r}")
        return x[tgt_den.shape[1]:]

    def page(self, r: int) -> Tuple[SSPage, Dict[Key, np.ndarray]]:
        dims, d, reps = {}, {}, {}
        for k in self.chains.degrees:
            for p in range(self.p_min, self.p_max + 1):
                R, _ = self.page_data(r, p, k)
                dims[(p, k - p)] = R.shape[1]
                reps[(p, k - p)] = R
        for (p, q), R in reps.items():
            if R.shape[1]:
                d[(p, q)] = self.differential(r, p, p + q, R)
        return SSPage(r=r, dims={k: v for k, v in dims.items() if v}, d=d), reps

    def infinity_dims(self) -> Dict[Key, int]:
        r = self.p_max - self.p_min + 2
        dims = {}
        for k in self.chains.degrees:
            for p in range(self.p_min, self.p_max + 1):
                R, _ = self.page_data(r, p, k)
                if R.shape[1]:
                    dims[(p, k - p)] = R.shape[1]
        return dims


def _total(dims: Dict[Key, int]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for (p, q), v in dims.items():
        if v:
            out[p + q] = out.get(p + q, 0) + v
    return dict(sorted(out.items()))


def filtered_spectral_sequence(F: FilteredComplex, r_max: int = 10) -> List[SSPage]:
    """Pages ``E^1 .. E^r`` stopping at ``r_max`` or when the page equals ``E^infinity``.

    Every page is checked for ``d^r o d^r = 0`` and against the next page's
    ``ker / im``; ``E^infinity`` is checked against the homology of the total
    complex.
    """
    if r_max < 1:
        raise ValueError("r_max must be at least 1")
    einf = F.infinity_dims()
    if _total(einf) != {k: v for k, v in _betti(F.chains).items() if v}:
        raise AssemblyError("E^infinity does not match the homology of the total complex")
    pages: List[SSPage] = []
    prev: Optional[SSPage] = None
    for r in range(1, r_max + 1):
        page, _ = F.page(r)
        page.check_d_squared()
        if prev is not None:
            expect = {k: v for k, v in prev.next_dims().items() if v}
            if expect != page.dims:
                raise AssemblyError(f"E^{r} is not the homology of (E^{r - 1}, d^{r - 1})")
        pages.append(page)
        if page.dims == einf:
            break
        prev = page
    return pages


def spectral_sequence(E: EquivariantComplex, r_max: int = 10) -> List[SSPage]:
    """Pages of the w-adic filtration of an equivariant complex.

    The first page is checked against ``E^1_{p,q} = H_q(C)`` for
    ``0 <= p <= N`` with ``d^1`` equal to the map induced by ``phi_1``.

    Raises
    ------
    AssemblyError
        If the first page disagrees with the base homology and ``phi_1``.
    """
    F = FilteredComplex(E.chains, E.filtration)
    pages = filtered_spectral_sequence(F, r_max)
    _check_first_page(E, F)
    return pages


def _check_first_page(E: EquivariantComplex, F: FilteredComplex) -> None:
    base = E.structure.base
    hC = HomologyData(base.chains())
    betti = hC.betti
    phi1 = E.structure.phi_total(1)
    base_chains = base.chains()
    page, reps = F.page(1)
    # coordinates of E^1 representatives in the base homology basis, per (p, q)
    A: Dict[Key, np.ndarray] = {}
    for (p, q), R in reps.items():
        if page.dim(p, q) != (betti.get(q, 0) if 0 <= p <= E.N else 0):
            raise AssemblyError(f"E^1_({p},{q}) has dimension {page.dim(p, q)}, expected H_{q}(C)")
        if R.shape[1] == 0:
            continue
        ix = E.chains.idx(p + q)
        full = f2.zeros(E.degree.size, R.shape[1])
        full[ix] = R
        top = E.component(p, full)[base_chains.idx(q)]
        Ap = hC.coords(q, top)
        if f2.rank(Ap) != Ap.shape[0] or Ap.shape[0] != Ap.shape[1]:
            raise AssemblyError(f"E^1_({p},{q}) representatives do not span H_{q}(C)")
        A[(p, q)] = Ap
    for (p, q), M in page.d.items():
        tgt = (p - 1, q)
        if tgt not in A:
            if M.size and M.any():
                raise AssemblyError(f"d^1 from ({p},{q}) hits an empty group")
            continue
        # phi_1 on the base homology in degree q
        R = hC.reps[q]
        full = f2.zeros(base.total_dim, R.shape[1])
        full[base_chains.idx(q)] = R
        img = f2.matmul(phi1, full)[base_chains.idx(q)]
        Phi = hC.coords(q, img)
        if not np.array_equal(f2.matmul(A[tgt], M), f2.matmul(Phi, A[(p, q)])):
            raise AssemblyError(f"d^1 at ({p},{q}) differs from the map induced by phi_1")
