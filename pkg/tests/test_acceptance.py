"""One test per acceptance criterion; the session summary prints a PASS/FAIL line for each."""

import time
from fractions import Fraction

import numpy as np
import pytest

import oracles
from conftest import SQRT2
from symreeb.census import Chord, ChordSystem, _tables, index_increase_ok, jump_search, window_census
from symreeb.errors import DegenerateCrossingError
from symreeb.homf2 import (HomologyData, build_equivariant, expected_positive_hw, fixtures,
                           spectral_sequence)
from symreeb.homf2 import f2
from symreeb.iterate import (ChordPath, chebyshev_power, doubled_blocks, doubled_matrix, iterate_chord,
                             mean_index, winding_indices)
from symreeb.maslov import LagrangianPath, frame_direct_sum, hormander_index, rs_index, rs_index_graph
from symreeb.reeb import HypersurfaceModel, chord_indices, chord_path, find_brake_chords
from symreeb.specflow import IMAG, REAL, SymmetricMatrixPath, assemble_operator, mu_spectral
from symreeb.symplin import (HalfInt, LagrangianFrame, SymplecticPath, anti_involution, block_decompose,
                            J0, random_symplectic)


def criterion(num, title):
    def wrap(fn):
        fn.criterion = (num, title)
        fn.detail = ""
        return fn
    return wrap


def _note(fn, text):
    fn.detail = text


def _transversality(P, L):
    """Smallest principal sine between ``P L`` and ``L``; zero iff they intersect."""
    Q, _ = np.linalg.qr(P @ L.F)
    return float(np.linalg.svd(L.F.T @ J0(L.m) @ Q, compute_uv=False).min())


def _sym(rng, k, scale=1.0):
    A = rng.standard_normal((k, k)) * scale
    return A + A.T


# ---------------------------------------------------------------------------


@criterion(1, "spectral baseline pi k, |k| <= 4, multiplicity n, rel 1e-3 at N_grid 2048, < 30 s")
def test_spectral_baseline():
    t0 = time.perf_counter()
    worst = 0.0
    for n in (1, 2, 3):
        op = assemble_operator(np.zeros((2 * n, 2 * n)), REAL, 2048)
        ev = np.sort(op.eigenvalues())
        off = op.zero_label_offset
        for k in range(-4, 5):
            block = ev[off + k * n: off + (k + 1) * n]
            assert block.size == n
            if k == 0:
                # relative error is undefined at 0; require |lambda| <= 1e-3 * pi
                err = float(np.max(np.abs(block))) / np.pi
            else:
                err = float(np.max(np.abs(block - np.pi * k))) / (np.pi * abs(k))
            worst = max(worst, err)
            # the block is separated from its neighbours
            if k < 4:
                assert ev[off + (k + 1) * n] - block.max() > 1.0
    dt = time.perf_counter() - t0
    _note(test_spectral_baseline, f"max rel err {worst:.1e}, {dt:.1f} s")
    assert worst <= 1e-3
    assert dt < 30


@criterion(2, "mu_spectral = rs_index on >= 50 random non-degenerate paths, both boundaries")
def test_index_equivalence():
    rng = np.random.default_rng(2)
    done, tried, fails = 0, 0, []
    while done < 60:
        tried += 1
        m = int(rng.integers(1, 4))
        A, B = _sym(rng, 2 * m, 1.5), _sym(rng, 2 * m)
        w = float(rng.uniform(1, 4))
        Sf = (lambda A, B, w: lambda t: A + np.cos(w * t) * B)(A, B, w)
        phi = SymplecticPath.from_generator(Sf, 1.0, m)
        P = phi.endpoint()
        frames = {REAL: LagrangianFrame.horizontal(m), IMAG: LagrangianFrame.vertical(m)}
        # non-degenerate with margin at both boundaries
        if min(_transversality(P, L) for L in frames.values()) < 1e-2:
            continue
        for bnd, L in frames.items():
            spec = mu_spectral(SymmetricMatrixPath(Sf, 1.0, m), bnd, N_grid=1024)
            cross = rs_index(LagrangianPath.from_symplectic(phi, L), L)
            if spec != cross:
                fails.append((tried, m, bnd, str(spec), str(cross)))
        done += 1
    _note(test_index_equivalence, f"{done} paths x 2 boundaries, {len(fails)} failures")
    assert not fails


@criterion(3, "RS axioms exact on a 100-path corpus; Hormander |s| <= (n-1)/2")
def test_axioms_and_hormander():
    rng = np.random.default_rng(3)
    corpus = []
    while len(corpus) < 100:
        m = int(rng.integers(1, 4))
        p = LagrangianPath.from_generator(_sym(rng, 2 * m, 3.0), LagrangianFrame.horizontal(m))
        V = LagrangianFrame.vertical(m).transform(random_symplectic(m, rng))
        try:
            mu = rs_index(p, V)
        except DegenerateCrossingError:
            continue  # corpus paths have regular crossings
        corpus.append((m, p, V, mu))
    I_checks = 0
    for i, (m, p, V, mu) in enumerate(corpus):
        c = float(rng.uniform(0.2, 0.8))
        assert rs_index(p.restrict(0.0, c), V) + rs_index(p.restrict(c, 1.0), V) == mu
        assert rs_index(p.reversed(), V) == -mu
        Psi = random_symplectic(m, rng, scale=0.5)
        assert rs_index(p.transform(Psi), V.transform(Psi)) == mu
        I = anti_involution(m)
        assert rs_index(p.transform(I), V.transform(I)) == -mu
        m2, q, W, nu = corpus[(i + 1) % len(corpus)]
        if m + m2 <= 4:
            assert rs_index(p.direct_sum(q), frame_direct_sum(V, W)) == mu + nu
            I_checks += 1
    # Hormander index in the configuration of the index-increase argument:
    # transverse half-dimension m = n - 1
    worst = Fraction(0)
    for trial in range(60):
        n = 2 + trial % 3
        m = n - 1
        PT = random_symplectic(m, rng, scale=0.8)
        P2 = doubled_matrix(PT)
        k = int(rng.integers(1, 6))
        L0 = LagrangianFrame.horizontal(m)
        V1 = LagrangianFrame(np.linalg.matrix_power(P2, k) @ L0.F)
        s = hormander_index(V1, L0, L0, LagrangianFrame(PT @ L0.F))
        worst = max(worst, abs(Fraction(s.twice, 2)) / Fraction(n - 1, 2))
        assert abs(s.twice) <= n - 1
    _note(test_axioms_and_hormander, f"100 paths, {I_checks} direct sums, max |s|/((n-1)/2) = {worst}")


@criterion(4, "ellipsoid E(1, sqrt2): 2 chords within 1e-8, exact indices, CZ(c^2) = mu_I + mu_-I, < 60 s")
def test_ellipsoid_oracle():
    t0 = time.perf_counter()
    model = HypersurfaceModel.ellipsoid([1.0, SQRT2])
    res = find_brake_chords(model)
    Ts = [c.T for c in res.chords]
    assert len(Ts) == 2
    errs = [abs(Ts[0] - 0.5), abs(Ts[1] - SQRT2 / 2)]
    assert max(errs) < 1e-8
    want = [(HalfInt(3), HalfInt(3)), (HalfInt(5), HalfInt(5))]
    for ch, w in zip(res.chords, want):
        cp = chord_path(model, ch)
        idx = chord_indices(model, ch, cp=cp)
        assert (idx.mu_I, idx.mu_minus_I) == w
        cz = rs_index_graph(iterate_chord(cp, 2))
        assert cz == idx.mu_I + idx.mu_minus_I
    dt = time.perf_counter() - t0
    _note(test_ellipsoid_oracle, f"|dT| <= {max(errs):.1e}, {dt:.1f} s")
    assert dt < 60


@criterion(5, "Chebyshev power = direct power (rel 1e-8), BC = A^2 - I and C = 2 X^T Z (1e-8)")
def test_chebyshev():
    rng = np.random.default_rng(5)
    worst = [0.0, 0.0, 0.0]
    for i in range(100):
        m = 1 + i % 4
        k = 1 + i % 10
        PT = random_symplectic(m, rng, scale=0.4)
        M = doubled_matrix(PT)
        ref = np.linalg.matrix_power(M, k)
        got = chebyshev_power(M, k)
        worst[0] = max(worst[0], np.max(np.abs(got - ref)) / np.max(np.abs(ref)))
        A, B, C = doubled_blocks(PT)
        X, Y, Z, W = block_decompose(PT)
        s = max(1.0, np.max(np.abs(A)) ** 2)
        worst[1] = max(worst[1], np.max(np.abs(B @ C - (A @ A - np.eye(m)))) / s)
        Mb = block_decompose(M)
        worst[2] = max(worst[2], np.max(np.abs(Mb[2] - 2 * X.T @ Z)) / max(1.0, np.max(np.abs(Mb[2]))))
    _note(test_chebyshev, "max rel errs " + ", ".join(f"{w:.1e}" for w in worst))
    assert max(worst) <= 1e-8


@criterion(6, "index increase mu(c^{l+1}) >= mu(c^l) + 3/2 - 1/2 for ellipsoid chords, l <= 50")
def test_index_increase(ellipsoid_paths):
    step = HalfInt(3) - HalfInt(1)
    for c, r in zip(ellipsoid_paths, (1 / SQRT2, SQRT2)):
        mu = winding_indices(c, 51)
        assert mu == [HalfInt.from_value(oracles.ellipsoid_mu(r, l)) for l in range(1, 52)]
        for l in range(1, 51):
            assert mu[l] >= mu[l - 1] + step
            assert mu[l] > mu[l - 1]
    _note(test_index_increase, "both chords, l = 1..50")


@criterion(7, "jump vectors at m_max = 1e4: >= 3 exact, K increasing, count = 2 for K >= 4, < 5 min")
def test_jump_vectors():
    t0 = time.perf_counter()
    model = HypersurfaceModel.ellipsoid([1.0, SQRT2])
    res = find_brake_chords(model)
    system = ChordSystem([Chord(f"c{i}", chord_path(model, ch, f"c{i}"))
                          for i, ch in enumerate(res.chords, 1)], n=2)
    m_max = 10_000
    tables = _tables(system, 2 * m_max + 1, {})
    vectors = jump_search(system, m_max=m_max, tables=tables)
    assert len(vectors) >= 3
    Ks = [v.K for v in vectors]
    assert all(b > a for a, b in zip(Ks, Ks[1:]))
    for v in vectors:
        for c, mj in zip(system.chords, v.m):
            t = tables[c.label]
            assert t[2 * mj - 1] - (HalfInt(2 * v.K) - t.mu_minus) == 0
            assert t[2 * mj + 1] - (HalfInt(2 * v.K) + t[1]) == 0
        if v.K >= 4:
            assert window_census(system, v, tables=tables).count == 2
    dt = time.perf_counter() - t0
    # brute-force cross-check on the closed-form tables
    ref_t = oracles.ellipsoid_tables(2 * m_max + 1)
    ref = oracles.jump_vectors(ref_t, [t[0] for t in ref_t], m_max)
    assert [(v.K, v.m) for v in vectors] == ref
    _note(test_jump_vectors, f"{len(vectors)} vectors, first K = {Ks[:3]}, {dt:.1f} s")
    assert dt < 300


@criterion(8, "equivariant algebra: D^2 = 0, E^1 = H(C) with d^1 = phi_1, point ladder to N = 20, hw of B^n")
def test_equivariant_algebra():
    N = 20
    cases = [("point", 1, N), ("twisted-point", 1, 1), ("two-point-swap", 1, N)]
    cases += [(name, n, N) for name in ("sphere", "ball-relative") for n in (1, 2, 3)]
    for name, n, NN in cases:
        E = build_equivariant(fixtures.get(name, n), NN)
        D = E.D.astype(np.int64)
        assert not ((D @ D) % 2).any()
        pages = spectral_sequence(E)  # checks E^1 and d^1 against phi_1
        betti = HomologyData(E.structure.base.chains()).betti
        expect = {(p, q): b for p in range(NN + 1) for q, b in betti.items() if b}
        assert pages[0].dims == expect
    for n in (1, 2, 3):
        Z, keep = fixtures.ball_pair(n)
        sub = build_equivariant(Z.subcomplex(keep), N)
        assert not f2.matmul(sub.D, sub.D).any()
    H = build_equivariant(fixtures.point(), N).homology()
    assert {k: v for k, v in H.items() if v} == {k: 1 for k in range(N + 1)}
    for n in (1, 2, 3):
        hw = expected_positive_hw({n: 1}, n, N)
        assert all(hw.get(k, 0) > 0 for k in range(1, N + 1))
    _note(test_equivariant_algebra, f"{len(cases)} fixtures")


@criterion(9, "mean index -> 1 + 1/sqrt2 within C/l at l = 200; > 1/2 on the convex corpus")
def test_mean_index(ellipsoid_paths):
    mi = mean_index(ellipsoid_paths[0], 200)
    target = 1 + 1 / SQRT2
    assert abs(mi.estimate - target) <= mi.bound
    corpus = []
    for axes in ([1.0, SQRT2], [1.0, 1.7], [1.0, SQRT2, np.sqrt(3.0)]):
        model = HypersurfaceModel.ellipsoid(axes)
        for ch in find_brake_chords(model).chords:
            a = 2 * ch.T  # period of the closed orbit = its axis
            ref = 1 + sum(a / b for b in axes if abs(b - a) > 1e-6)
            corpus.append((chord_path(model, ch), ref))
    bumped = HypersurfaceModel.perturbed_ellipsoid([1.0, SQRT2], 0.05, np.diag([1, 0, 1, 0.0]))
    assert bumped.convex
    for ch in find_brake_chords(bumped, T_scan=1.2).chords:
        corpus.append((chord_path(bumped, ch), None))
    assert len(corpus) == 2 + 2 + 3 + 2
    lows = []
    for cp, ref in corpus:
        e = mean_index(cp, 200)
        lows.append(e.estimate - e.bound)
        assert e.estimate - e.bound > 0.5
        if ref is not None:
            assert abs(e.estimate - ref) <= e.bound
    _note(test_mean_index, f"c1 estimate {mi.estimate:.5f} vs {target:.5f} (bound {mi.bound:.3f}); "
                           f"{len(corpus)} convex chords, min lower bound {min(lows):.3f}")
