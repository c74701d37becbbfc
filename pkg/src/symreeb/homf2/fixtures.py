"""Small Z_2-complexes with known equivariant homology.

The cellular models use F_2 coefficients, so orientation signs drop out.
A free cellular involution ``sigma`` gives ``phi_1 = 1 + sigma`` and no
higher maps.
"""

from __future__ import annotations

from typing import Dict, List, Tuple

import numpy as np

from .complexes import F2Complex, Z2ComplexStructure

_SWAP = np.array([[0, 1], [1, 0]], dtype=np.uint8)
_FULL = np.ones((2, 2), dtype=np.uint8)


def point(twisted: bool = False) -> Z2ComplexStructure:
    """One cell in degree 0.

    With ``twisted=False`` the action is trivial and the equivariant
    homology is the ladder ``F_2`` in every degree ``0..N``. With
    ``twisted=True`` ``phi_1 = id``; ``phi_1 o phi_1 != 0`` so only the
    ``N <= 1`` truncations are complexes, and their homology vanishes.
    """
    base = F2Complex({0: 1})
    if twisted:
        return Z2ComplexStructure(base, [{0: np.ones((1, 1), dtype=np.uint8)}])
    return Z2ComplexStructure(base, [])


def two_point_swap() -> Z2ComplexStructure:
    """Two points exchanged by the action; the quotient is a point."""
    return Z2ComplexStructure.from_involution(F2Complex({0: 2}), {0: _SWAP})


def _sphere_cells(n: int) -> Tuple[Dict[int, int], Dict[int, np.ndarray], Dict[int, np.ndarray]]:
    dims = {i: 2 for i in range(n + 1)}
    bd = {i: _FULL.copy() for i in range(1, n + 1)}
    sigma = {i: _SWAP.copy() for i in range(n + 1)}
    return dims, bd, sigma


def sphere_antipodal(n: int) -> Z2ComplexStructure:
    """``S^n`` with two cells per dimension swapped by the antipodal map.

    Equivariant homology equals ``H_*(RP^n)``: ``F_2`` in degrees ``0..n``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    dims, bd, sigma = _sphere_cells(n)
    return Z2ComplexStructure.from_involution(F2Complex(dims, bd), sigma)


def sphere_pair(n: int) -> Tuple[Z2ComplexStructure, Dict[int, List[int]]]:
    """``S^n`` with its invariant equator ``S^{n-1}`` as a subcomplex."""
    if n < 1:
        raise ValueError("n must be at least 1")
    Z = sphere_antipodal(n)
    return Z, {i: [0, 1] for i in range(n)}


def ball_pair(n: int) -> Tuple[Z2ComplexStructure, Dict[int, List[int]]]:
    """``B^n`` with ``x -> -x`` and its boundary sphere as a subcomplex.

    Cells: the ``S^{n-1}`` cells plus one ``n``-cell fixed by the action.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    dims, bd, sigma = _sphere_cells(n - 1)
    dims[n] = 1
    bd[n] = np.ones((2, 1), dtype=np.uint8)
    sigma[n] = np.ones((1, 1), dtype=np.uint8)
    Z = Z2ComplexStructure.from_involution(F2Complex(dims, bd), sigma)
    return Z, {i: [0, 1] for i in range(n)}


def ball_relative(n: int) -> Z2ComplexStructure:
    """Relative chains of ``(B^n, S^{n-1})``: one invariant cell in degree ``n``."""
    Z, keep = ball_pair(n)
    return Z.quotient(keep)


def get(name: str, n: int = 1) -> Z2ComplexStructure:
    """Fixture by name: ``point``, ``twisted-point``, ``two-point-swap``, ``sphere``, ``ball-relative``."""
    if name == "point":
        return point()
    if name == "twisted-point":
        return point(twisted=True)
    if name == "two-point-swap":
        return two_point_swap()
    if name == "sphere":
        return sphere_antipodal(n)
    if name == "ball-relative":
        return ball_relative(n)
    raise KeyError(f"unknown fixture {name!r}")
