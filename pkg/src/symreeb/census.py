"""Common index jumps and window counting for families of symmetric chords."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ._parallel import parallel_map
from .errors import HypothesisError, PairingError, PreconditionError
from .iterate import ChordPath, winding_indices
from .symplin import HalfInt, LagrangianFrame

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Chord:
    label: str
    path: ChordPath
    doubly_symmetric: Optional[bool] = None

    @property
    def T(self) -> float:
        return self.path.T


@dataclass(frozen=True, eq=False)
class ChordSystem:
    """Chords on one hypersurface in C^n.

    ``n`` is the complex dimension of the ambient space; the chord paths may
    be ambient (``2n x 2n``) or transverse (``2(n-1) x 2(n-1)``).
    """

    chords: Sequence[Chord]
    n: int

    def __post_init__(self):
        labels = [c.label for c in self.chords]
        if len(set(labels)) != len(labels):
            raise PreconditionError("chord labels must be unique")
        for c in self.chords:
            if c.path.m not in (self.n, self.n - 1):
                raise PreconditionError(
                    f"chord {c.label} has half-dimension {c.path.m}, expected {self.n} or {self.n - 1}")


@dataclass(frozen=True)
class JumpVector:
    K: int
    m: tuple
    residuals: tuple  # per chord: (first, second) defects as HalfInt

    @property
    def exact(self) -> bool:
        return all(r1 == 0 and r2 == 0 for r1, r2 in self.residuals)

    def to_dict(self) -> dict:
        return {"K": self.K, "m": list(self.m),
                "residuals": [[str(a), str(b)] for a, b in self.residuals]}


@dataclass
class IndexTable:
    """``mu_I(c^l)`` for ``l = 1..len(mu)`` and ``mu_{-I}(c)``."""

    mu: List[HalfInt]
    mu_minus: HalfInt

    def __getitem__(self, ell: int) -> HalfInt:
        return self.mu[ell - 1]

    @property
    def twice(self) -> np.ndarray:
        """``2 mu_I(c^l)`` as integers, cached."""
        cache = self.__dict__.get("_twice")
        if cache is None or cache.size != len(self.mu):
            cache = np.array([x.twice for x in self.mu], dtype=np.int64)
            self.__dict__["_twice"] = cache
        return cache

    @property
    def mean_index(self) -> float:
        return float(self.mu[-1]) / len(self.mu)

    def mean_bound(self, m: int) -> float:
        return (m + 1) / len(self.mu)


def index_table(chord: Chord, ell_max: int) -> IndexTable:
    m = chord.path.m
    mu = winding_indices(chord.path, ell_max)
    mu_minus = winding_indices(chord.path, 1, LagrangianFrame.vertical(m))[0]
    return IndexTable(mu=mu, mu_minus=mu_minus)


def _tables(sys: ChordSystem, ell_max: int, tables: Optional[Dict[str, IndexTable]], workers: int = 1):
    tables = dict(tables or {})
    todo = [c for c in sys.chords if c.label not in tables or len(tables[c.label].mu) < ell_max]
    res = parallel_map(index_table, [(c, ell_max) for c in todo], workers)
    for c, t in zip(todo, res):
        tables[c.label] = t
    return tables


def jump_search(sys: ChordSystem, K_max: Optional[int] = None, m_max: int = 1000, *,
                tables: Optional[Dict[str, IndexTable]] = None, workers: int = 1) -> List[JumpVector]:
    """All vectors ``(K, m_1, ..., m_k)`` with ``m_j <= m_max`` such that for each chord

        mu(c_j^{2m_j - 1}) = K - mu_{-I}(c_j)   and   mu(c_j^{2m_j + 1}) = K + mu_I(c_j).

    Raises
    ------
    HypothesisError
        If some chord's mean index is not certifiably positive.
    """
    if not sys.chords:
        return []
    ell_max = 2 * m_max + 1
    tables = _tables(sys, ell_max, tables, workers)
    candidates = []
    for c in sys.chords:
        t = tables[c.label]
        if t.mean_index <= t.mean_bound(c.path.m):
            raise HypothesisError(
                f"chord {c.label}: mean index {t.mean_index:.4f} is not certifiably positive")
        a, b = t.mu_minus, t[1]
        cand = {}
        for mj in range(1, m_max + 1):
            K1 = t[2 * mj - 1] + a
            K2 = t[2 * mj + 1] - b
            if K1 == K2 and K1.is_integer:
                cand[int(K1.value)] = mj
        candidates.append(cand)
    common = set(candidates[0])
    for cand in candidates[1:]:
        common &= set(cand)
    out = []
    for K in sorted(common):
        if K_max is not None and K > K_max:
            break
        if K < 1:
            continue
        ms = tuple(cand[K] for cand in candidates)
        res = []
        for c, mj in zip(sys.chords, ms):
            t = tables[c.label]
            res.append((t[2 * mj - 1] - (K - t.mu_minus), t[2 * mj + 1] - (K + t[1])))
        v = JumpVector(K=K, m=ms, residuals=tuple(res))
        assert v.exact
        out.append(v)
    return out


def grading(mu: HalfInt, n: int, convention: str = "window") -> HalfInt:
    """Degree of an iterate from its index.

    ``"window"``: ``mu - (n-1)/2``; ``"floer"``: ``-mu - n/2``.
    """
    if convention == "window":
        return mu - HalfInt(n - 1)
    if convention == "floer":
        return -mu - HalfInt(n)
    raise ValueError(f"unknown grading convention {convention!r}")


@dataclass
class CensusReport:
    K: int
    n: int
    hits: Dict[str, List[tuple]]  # label -> [(ell, grading)]
    count: int
    verdict: bool
    increase_ok: Dict[str, bool]
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "n": self.n,
            "hits": {k: [[ell, str(g)] for ell, g in v] for k, v in self.hits.items()},
            "count": self.count,
            "verdict": self.verdict,
            "increase_ok": self.increase_ok,
            "warnings": self.warnings,
        }


def index_increase_ok(table: IndexTable, n: int, ell_max: Optional[int] = None) -> bool:
    """``mu(c^{l+1}) >= mu(c^l) + mu(c) - (n-1)/2`` for all ``l < ell_max``."""
    top = len(table.mu) if ell_max is None else min(ell_max, len(table.mu))
    tw = table.twice[:top]
    step = table[1].twice - (n - 1)
    return bool(np.all(np.diff(tw) >= step))


def window_census(sys: ChordSystem, v: JumpVector, *,
                  tables: Optional[Dict[str, IndexTable]] = None) -> CensusReport:
    """Iterates whose grading falls in ``[K - n + 1, K]``.

    Only ``c_j^{2 m_j}`` is expected there; the index-increase property is
    checked for every chord up to ``2 m_j + 1``. ``verdict`` is true when at
    least ``n`` distinct chords hit the window.
    """
    if not v.exact:
        raise PreconditionError("jump vector is not exact")
    n = sys.n
    need = 2 * max(v.m) + 1 if v.m else 1
    tables = _tables(sys, need, tables)
    warnings = []
    if v.K < n + 2:
        warnings.append(f"K = {v.K} < n + 2 = {n + 2}; the counting argument needs K >= n + 2")
    lo, hi = HalfInt(2 * (v.K - n + 1)), HalfInt(2 * v.K)
    hits, inc = {}, {}
    for c, mj in zip(sys.chords, v.m):
        t = tables[c.label]
        top = 2 * mj + 1
        inc[c.label] = index_increase_ok(t, n, top)
        if not inc[c.label]:
            warnings.append(f"chord {c.label} violates the index-increase bound")
        g = t.twice[:top] - (n - 1)  # twice the window grading
        sel = np.flatnonzero((g >= lo.twice) & (g <= hi.twice))
        hits[c.label] = [(int(i) + 1, HalfInt(int(g[i]))) for i in sel]
        if inc[c.label] and len(hits[c.label]) > 1:
            warnings.append(f"chord {c.label} has {len(hits[c.label])} iterates in the window")
    count = sum(1 for h in hits.values() if h)
    return CensusReport(K=v.K, n=n, hits=hits, count=count, verdict=count >= n,
                        increase_ok=inc, warnings=warnings)


@dataclass(frozen=True)
class DoublySymmetricCensus:
    k: int
    l: int
    bound: int

    @property
    def total(self) -> int:
        return self.k + 2 * self.l

    @property
    def verdict(self) -> bool:
        return self.total >= self.bound


def doubly_symmetric_census(sys: ChordSystem) -> DoublySymmetricCensus:
    """``k`` doubly symmetric chords, ``l`` pairs of the others, bound ``n + l``.

    Raises
    ------
    PreconditionError
        If a chord lacks its doubly-symmetric flag.
    PairingError
        If the chords that are not doubly symmetric do not pair up.
    """
    flags = [c.doubly_symmetric for c in sys.chords]
    if any(f is None for f in flags):
        missing = [c.label for c in sys.chords if c.doubly_symmetric is None]
        raise PreconditionError(f"doubly-symmetric flag missing for {missing}")
    k = sum(1 for f in flags if f)
    rest = len(flags) - k
    if rest % 2:
        raise PairingError(f"{rest} chords are not doubly symmetric; they must come in pairs")
    l = rest // 2
    return DoublySymmetricCensus(k=k, l=l, bound=sys.n + l)
