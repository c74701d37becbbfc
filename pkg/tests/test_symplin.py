from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symreeb.errors import DimensionError, IndeterminateRankError, InvariantError
from symreeb.symplin import (HalfInt, J0, LagrangianFrame, SymplecticMatrix, SymplecticPath,
                             anti_involution, block_assemble, block_decompose, direct_sum,
                             intersection_basis, intersection_dimension, is_anti_symplectic,
                             is_symplectic, omega, random_symplectic, rotation, symplectic_inverse)

ints = st.integers(-10**6, 10**6)


class TestHalfInt:
    @given(ints, ints)
    def test_addition_matches_fractions(self, a, b):
        assert (HalfInt(a) + HalfInt(b)).value == Fraction(a, 2) + Fraction(b, 2)
        assert (HalfInt(a) - HalfInt(b)).value == Fraction(a, 2) - Fraction(b, 2)

    @given(ints, ints)
    def test_order_matches_fractions(self, a, b):
        assert (HalfInt(a) < HalfInt(b)) == (Fraction(a, 2) < Fraction(b, 2))
        assert (HalfInt(a) == HalfInt(b)) == (a == b)

    @given(ints)
    def test_string_round_trip(self, a):
        h = HalfInt(a)
        assert HalfInt.from_value(str(h)) == h

    def test_rendering(self):
        assert str(HalfInt(3)) == "3/2"
        assert str(HalfInt(4)) == "2"
        assert str(HalfInt(-1)) == "-1/2"

    def test_from_value_forms(self):
        assert HalfInt.from_value(1.5) == HalfInt(3)
        assert HalfInt.from_value(Fraction(-5, 2)) == HalfInt(-5)
        assert HalfInt.from_value(2) == HalfInt(4)

    @pytest.mark.parametrize("bad", [0.3, "1/3", Fraction(1, 4)])
    def test_rejects_non_half_integers(self, bad):
        with pytest.raises(ValueError):
            HalfInt.from_value(bad)

    def test_rejects_non_int_numerator(self):
        with pytest.raises(TypeError):
            HalfInt(1.5)


class TestMatrices:
    def test_conventions(self):
        J = J0(1)
        assert np.array_equal(J, [[0, -1], [1, 0]])
        u, v = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        assert omega(u, v) == pytest.approx(1.0)  # <J u, v>
        assert np.array_equal(anti_involution(1), np.diag([1, -1]))

    @given(st.integers(1, 4), st.integers(0, 2**32 - 1))
    def test_random_symplectic_and_inverse(self, m, seed):
        M = random_symplectic(m, np.random.default_rng(seed), scale=0.7)
        assert is_symplectic(M, tol=1e-8)
        Minv = symplectic_inverse(M, tol=1e-8)
        assert np.allclose(Minv @ M, np.eye(2 * m), atol=1e-8 * np.abs(M).max() ** 2)

    def test_anti_involution_is_anti_symplectic(self):
        for m in (1, 2, 3):
            assert is_anti_symplectic(anti_involution(m))
            assert not is_symplectic(anti_involution(m))

    def test_inverse_rejects_non_symplectic(self):
        with pytest.raises(InvariantError):
            symplectic_inverse(np.diag([2.0, 2.0]))
        with pytest.raises(InvariantError):
            SymplecticMatrix(np.diag([1.0, 3.0, 1.0, 1.0]))

    def test_blocks_round_trip(self, rng):
        M = random_symplectic(2, rng)
        assert np.array_equal(block_assemble(*block_decompose(M)), M)

    def test_direct_sum_is_symplectic(self, rng):
        A, B = random_symplectic(1, rng), random_symplectic(2, rng)
        assert is_symplectic(direct_sum(A, B), tol=1e-8)

    def test_rotation_is_exp_theta_J(self):
        from scipy.linalg import expm

        assert np.allclose(rotation(0.7, 2), expm(0.7 * J0(2)))

    def test_odd_size_rejected(self):
        with pytest.raises(DimensionError):
            symplectic_inverse(np.eye(3))


class TestFrames:
    def test_canonical_frame_is_orthonormal(self):
        L = LagrangianFrame(np.array([[2.0], [0.0]]))
        assert np.allclose(L.F, [[1.0], [0.0]])

    def test_isotropy_enforced(self):
        with pytest.raises(InvariantError):
            LagrangianFrame(np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))

    def test_shape_enforced(self):
        with pytest.raises(DimensionError):
            LagrangianFrame(np.ones((3, 1)))

    def test_graph_must_be_symmetric(self):
        with pytest.raises(InvariantError):
            LagrangianFrame.graph([[0.0, 1.0], [0.0, 0.0]])

    @given(st.integers(1, 4), st.integers(0, 2**32 - 1), st.integers(0, 4))
    def test_intersection_dimension_planted(self, m, seed, k):
        k = min(k, m)
        rng = np.random.default_rng(seed)
        # graphs of A and B meet in ker(A - B); plant a k-dimensional kernel
        Q, _ = np.linalg.qr(rng.standard_normal((m, m)))
        d = np.r_[np.zeros(k), rng.uniform(0.5, 2.0, m - k) * rng.choice([-1, 1], m - k)]
        A = rng.standard_normal((m, m))
        A = A + A.T
        B = A - Q @ np.diag(d) @ Q.T
        F1, F2 = LagrangianFrame.graph(A), LagrangianFrame.graph(B)
        assert intersection_dimension(F1, F2) == k
        assert intersection_basis(F1, F2).shape == (2 * m, k)

    def test_same_subspace(self, rng):
        M = random_symplectic(2, rng)
        L = LagrangianFrame.horizontal(2).transform(M)
        assert L.same_subspace(LagrangianFrame(L.F @ np.array([[1.0, 2.0], [0.0, 1.0]])))

    def test_ambiguity_band_raises(self):
        L0 = LagrangianFrame.horizontal(1)
        L = LagrangianFrame.graph([[1e-9]])
        with pytest.raises(IndeterminateRankError):
            intersection_dimension(L0, L, tol=1e-9)


class TestPaths:
    def test_constant_generator_matches_rotation(self):
        P = SymplecticPath.constant_generator(np.eye(2), 1.0)
        assert np.allclose(P(0.3), rotation(0.3))

    def test_from_generator_integrates(self):
        S = lambda t: np.diag([1.0 + t, 1.0 + t])  # noqa: E731
        P = SymplecticPath.from_generator(S, 1.0, 1)
        # commuting family: Phi(1) = exp(J int_0^1 (1 + t) dt) = R(3/2)
        assert np.allclose(P.endpoint(), rotation(1.5), atol=1e-10)
        assert is_symplectic(P.endpoint(), tol=1e-9)
