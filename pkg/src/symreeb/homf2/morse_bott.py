"""First page of the action-filtered spectral sequence and the expected positive homology."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..errors import GradingError, PreconditionError
from ..symplin import HalfInt
from .spectral import SSPage


@dataclass(frozen=True)
class ChordComponent:
    """A connected family of chords at one action level.

    ``dim = 0`` stands for a Z_2-pair of non-degenerate chords, whose
    equivariant homology is ``F_2`` in degree 0. Positive-dimensional
    families must supply ``homology``, their Z_2-equivariant Betti numbers.
    """

    mu: HalfInt
    dim: int = 0
    homology: Optional[Mapping[int, int]] = None
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "mu", HalfInt.from_value(self.mu))
        if self.dim < 0:
            raise ValueError("component dimension must be non-negative")
        if self.dim > 0 and self.homology is None:
            raise PreconditionError(f"component {self.label!r} of dimension {self.dim} needs its homology")

    def betti(self) -> Mapping[int, int]:
        return self.homology if self.homology is not None else {0: 1}

    def shift(self, n: int) -> HalfInt:
        """Degree offset ``mu - dim + 1/2 - n/2`` added to homology degrees."""
        return self.mu - HalfInt(2 * self.dim) + HalfInt(1) - HalfInt(n)


def generator_degree(mu, n: int) -> int:
    """Degree ``mu - n/2 + 1/2`` of a non-degenerate chord pair.

    Raises
    ------
    GradingError
        If the value is not an integer.
    """
    d = HalfInt.from_value(mu) - HalfInt(n) + HalfInt(1)
    if not d.is_integer:
        raise GradingError(f"index {HalfInt.from_value(mu)} with n = {n} gives non-integral degree {d}")
    return int(d.value)


def morse_bott_e1(spectrum: Sequence[Tuple[float, Sequence[ChordComponent]]], n: int) -> SSPage:
    """Assemble ``E^1`` from action levels ``T_0 < T_1 < ...``.

    Level ``p`` contributes ``H_j`` of each component in total degree
    ``j + mu - dim + 1/2 - n/2``; for a chord pair this is ``mu - n/2 + 1/2``.

    Raises
    ------
    PreconditionError
        If the actions are not strictly increasing.
    GradingError
        If some degree is not an integer.
    """
    Ts = [float(T) for T, _ in spectrum]
    if any(b <= a for a, b in zip(Ts, Ts[1:])):
        raise PreconditionError("action levels must be strictly increasing")
    dims: Dict[Tuple[int, int], int] = {}
    for p, (_, comps) in enumerate(spectrum):
        for c in comps:
            if not isinstance(c, ChordComponent):
                c = ChordComponent(**c)
            s = c.shift(n)
            if not s.is_integer:
                raise GradingError(
                    f"component {c.label!r}: index {c.mu}, dim {c.dim}, n = {n} gives shift {s}")
            for j, b in c.betti().items():
                if b:
                    k = int(j) + int(s.value)
                    dims[(p, k - p)] = dims.get((p, k - p), 0) + int(b)
    return SSPage(r=1, dims=dims, d={}, differentials_known=False)


def spectrum_from_iterates(entries: Sequence[Tuple[str, float, Sequence]], rel_tol: float = 1e-9):
    """Group iterates ``(label, T, [mu(c^1), mu(c^2), ...])`` into action levels.

    The ``l``-th iterate has action ``l * T``; coincident actions share a level.
    """
    items = []
    for label, T, mus in entries:
        for ell, mu in enumerate(mus, start=1):
            items.append((ell * float(T), ChordComponent(mu=mu, label=f"{label}^{ell}")))
    items.sort(key=lambda t: t[0])
    levels: List[Tuple[float, List[ChordComponent]]] = []
    for T, comp in items:
        if levels and abs(T - levels[-1][0]) <= rel_tol * max(1.0, T):
            levels[-1][1].append(comp)
        else:
            levels.append((T, [comp]))
    return levels


def expected_positive_hw(relative_homology: Mapping[int, int], n: int, N: int) -> Dict[int, int]:
    """``(H_*(L, dL) (x) F_2[w]/(w^{N+1}))`` shifted down by ``n - 1``.

    ``out[k] = sum_{l=0}^{N} h_{k + n - 1 - l}``; zero entries are dropped.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    out: Dict[int, int] = {}
    for j, h in relative_homology.items():
        if not h:
            continue
        for l in range(N + 1):
            k = int(j) + l - (n - 1)
            out[k] = out.get(k, 0) + int(h)
    return dict(sorted((k, v) for k, v in out.items() if v))
