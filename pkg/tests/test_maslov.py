import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from symreeb.errors import DegenerateCrossingError, DimensionError, NoCrossingError
from symreeb.maslov import (LagrangianPath, crossing_form, frame_direct_sum, hormander_graph_formula,
                            hormander_index, rs_index, rs_index_graph, rs_index_report)
from symreeb.symplin import (HalfInt, LagrangianFrame, SymplecticPath, anti_involution,
                             random_symplectic, rotation)

L0 = LagrangianFrame.horizontal(1)
seeds = st.integers(0, 2**32 - 1)


def hi(x) -> HalfInt:
    return HalfInt.from_value(x)


def affine_graph_path(A0, A1):
    A0, A1 = np.asarray(A0, float), np.asarray(A1, float)
    m = A0.shape[0]
    return LagrangianPath(lambda t: np.vstack([np.eye(m), A0 + t * (A1 - A0)]), 0.0, 1.0, m)


def rand_sym(rng, m, scale=1.0):
    A = rng.standard_normal((m, m)) * scale
    return (A + A.T) / 2


class TestExamples:
    def test_constant_path_is_zero(self):
        p = LagrangianPath(lambda t: L0.F, 0.0, 1.0, 1)
        assert rs_index(p, L0) == 0
        assert rs_index(p, LagrangianFrame.vertical(1)) == 0

    def test_constant_identity_path_cz_zero(self):
        assert rs_index_graph(SymplecticPath(lambda t: np.eye(2), 1.0, 1)) == 0

    def test_full_rotation_cz_two(self):
        assert rs_index_graph(SymplecticPath.constant_generator(2 * np.pi * np.eye(2))) == 2

    def test_half_turn_of_horizontal(self):
        p = LagrangianPath(lambda t: rotation(np.pi * t) @ L0.F, 0.0, 1.0, 1)
        rep = rs_index_report(p, L0)
        assert rep.index == 1
        assert [c.weight for c in rep.crossings] == [HalfInt(1), HalfInt(1)]
        assert all(c.signature == 1 for c in rep.crossings)

    def test_ellipsoid_closed_orbit_cz_three(self):
        # Hessian of pi|z1|^2 + pi|z2|^2/sqrt2, one period of the short orbit
        d = [2 * np.pi, 2 * np.pi / math.sqrt(2)]
        S = np.diag(d + d)
        assert rs_index_graph(SymplecticPath.constant_generator(S, 1.0)) == 3


class TestClosedForms:
    @given(st.floats(0.05, 30.0))
    def test_rotation_cz(self, theta):
        w = theta / (2 * np.pi)
        assume(abs(w - round(w)) > 1e-3)
        psi = SymplecticPath.constant_generator(theta * np.eye(2))
        assert rs_index_graph(psi) == oracles.rotation_cz(theta)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_rotation_cz_integer_turns(self, k):
        psi = SymplecticPath.constant_generator(2 * np.pi * k * np.eye(2))
        assert rs_index_graph(psi) == oracles.rotation_cz(2 * np.pi * k)

    @given(st.floats(0.05, 20.0))
    def test_horizontal_rotation(self, theta):
        w = theta / np.pi
        assume(abs(w - round(w)) > 1e-3)
        p = LagrangianPath.from_generator(theta * np.eye(2), L0)
        assert rs_index(p, L0) == hi(oracles.rotation_rs_horizontal(theta))

    @given(st.integers(1, 3), seeds)
    def test_affine_graph_paths(self, m, seed):
        rng = np.random.default_rng(seed)
        A0, A1, B = (rand_sym(rng, m, 2.0) for _ in range(3))
        gap = min(np.abs(np.linalg.eigvalsh(A0 - B)).min(), np.abs(np.linalg.eigvalsh(A1 - B)).min())
        assume(gap > 1e-2)
        got = rs_index(affine_graph_path(A0, A1), LagrangianFrame.graph(B))
        assert got == hi(oracles.graph_path_index(A0, A1, B))


class TestAxioms:
    @given(st.integers(1, 3), seeds, st.floats(0.1, 0.9))
    def test_catenation(self, m, seed, c):
        rng = np.random.default_rng(seed)
        p = LagrangianPath.from_generator(rand_sym(rng, 2 * m, 6.0), LagrangianFrame.horizontal(m))
        V = LagrangianFrame.horizontal(m).transform(random_symplectic(m, rng))
        try:
            whole = rs_index(p, V)
            parts = rs_index(p.restrict(0.0, c), V) + rs_index(p.restrict(c, 1.0), V)
        except DegenerateCrossingError:
            assume(False)
        assert whole == parts

    @given(st.integers(1, 3), seeds)
    def test_reversal(self, m, seed):
        rng = np.random.default_rng(seed)
        p = LagrangianPath.from_generator(rand_sym(rng, 2 * m, 6.0), LagrangianFrame.horizontal(m))
        V = LagrangianFrame.vertical(m).transform(random_symplectic(m, rng))
        assert rs_index(p.reversed(), V) == -rs_index(p, V)

    @given(st.integers(1, 2), seeds)
    def test_anti_symplectic_naturality(self, m, seed):
        rng = np.random.default_rng(seed)
        p = LagrangianPath.from_generator(rand_sym(rng, 2 * m, 6.0), LagrangianFrame.horizontal(m))
        V = LagrangianFrame.vertical(m).transform(random_symplectic(m, rng))
        I = anti_involution(m)
        assert rs_index(p.transform(I), V.transform(I)) == -rs_index(p, V)

    def test_direct_sum(self, rng):
        p = LagrangianPath.from_generator(rand_sym(rng, 2, 6.0), L0)
        q = LagrangianPath.from_generator(rand_sym(rng, 4, 6.0), LagrangianFrame.horizontal(2))
        V, W = LagrangianFrame.vertical(1), LagrangianFrame.horizontal(2)
        assert rs_index(p.direct_sum(q), frame_direct_sum(V, W)) == rs_index(p, V) + rs_index(q, W)


class TestCrossingForm:
    def test_generator_identity_gives_positive_form(self):
        p = LagrangianPath.from_generator(np.eye(2), L0)
        rec = crossing_form(p, L0, 0.0)
        assert rec.signature == 1 and rec.regular

    @given(st.integers(1, 3), seeds)
    def test_chart_form_matches_generator_form(self, m, seed):
        # the chart form uses the complement J0 Lambda(t0); <v, S v> needs no complement
        rng = np.random.default_rng(seed)
        S = rand_sym(rng, 2 * m, 3.0)
        L = LagrangianFrame.horizontal(m)
        with_gen = LagrangianPath.from_generator(S, L)
        bare = LagrangianPath(with_gen.frame, 0.0, 1.0, m)
        a = crossing_form(with_gen, L, 0.0)  # check=True compares both routes
        b = crossing_form(bare, L, 0.0)
        assert a.signature == b.signature == oracles.signature(S[:m, :m])

    def test_transverse_time_raises(self):
        p = LagrangianPath.from_generator(np.eye(2), L0)
        with pytest.raises(NoCrossingError):
            crossing_form(p, L0, 0.5)

    def test_tangency_is_reported(self):
        p = LagrangianPath(lambda t: np.array([[1.0], [(t - 0.5) ** 2]]), 0.0, 1.0, 1)
        with pytest.raises(DegenerateCrossingError) as exc:
            rs_index(p, L0)
        assert exc.value.time == pytest.approx(0.5, abs=1e-3)

    def test_dimension_mismatch(self):
        p = LagrangianPath.from_generator(np.eye(2), L0)
        with pytest.raises(DimensionError):
            rs_index(p, LagrangianFrame.horizontal(2))


class TestHormander:
    def test_equal_references_give_zero(self, rng):
        V = LagrangianFrame.graph(rand_sym(rng, 2))
        L1, L2 = LagrangianFrame.graph(rand_sym(rng, 2)), LagrangianFrame.graph(rand_sym(rng, 2))
        assert hormander_index(V, V, L1, L2) == 0

    def test_equal_ends_give_zero(self, rng):
        V1, V2 = LagrangianFrame.graph(rand_sym(rng, 2)), LagrangianFrame.graph(rand_sym(rng, 2))
        L = LagrangianFrame.graph(rand_sym(rng, 2))
        assert hormander_index(V1, V2, L, L) == 0

    def test_worked_graph_example(self):
        A0, A1, B0, B1 = [[1.0]], [[0.0]], [[0.0]], [[3.0]]
        s = hormander_index(*(LagrangianFrame.graph(x) for x in (A0, A1, B0, B1)))
        assert s == HalfInt(-1)
        assert hormander_graph_formula(A0, A1, B0, B1) == HalfInt(-1)

    @given(st.integers(1, 3), seeds)
    def test_graph_formula_matches_rs_difference(self, m, seed):
        rng = np.random.default_rng(seed)
        A0, A1, B0, B1 = (rand_sym(rng, m, 2.0) for _ in range(4))
        for X, Y in ((B0, A0), (B0, A1), (B1, A0), (B1, A1)):
            assume(np.abs(np.linalg.eigvalsh(X - Y)).min() > 1e-2)
        tw = (oracles.signature(B1 - A1) - oracles.signature(B0 - A1)
              - oracles.signature(B1 - A0) + oracles.signature(B0 - A0))
        s = hormander_index(*(LagrangianFrame.graph(x) for x in (A0, A1, B0, B1)))
        assert s == HalfInt(tw)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            hormander_index(LagrangianFrame.horizontal(1), LagrangianFrame.horizontal(2), L0, L0)
