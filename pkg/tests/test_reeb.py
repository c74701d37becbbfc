import numpy as np
import pytest

import oracles
from conftest import SQRT2
from symreeb.errors import InvariantError, PreconditionError
from symreeb.iterate import winding_indices
from symreeb.reeb import (HypersurfaceModel, chord_indices, chord_path, dynamical_convexity_check,
                          find_brake_chords, linearized_flow, reduced_indices, reeb_flow, verify_pair,
                          xi_frame)
from symreeb.symplin import HalfInt, anti_involution, is_symplectic

PINCH = -0.9
BUMP = 0.05


# Along an axis circle of these models the Hessian is block diagonal, so the
# transverse linearized flow is a rotation. The ratio of the transverse to the
# tangential Hessian block gives the indices via the ellipsoid closed form.
def pinched_ratio():
    return 1 / SQRT2 + PINCH


def bump_ratios():
    return ((1 + BUMP) / SQRT2 - BUMP) / (1 + BUMP), SQRT2 + BUMP


@pytest.fixture(scope="module")
def pinched():
    return HypersurfaceModel.perturbed_ellipsoid([1.0, SQRT2], PINCH, np.diag([0, 1, 0, 1.0]))


@pytest.fixture(scope="module")
def bumped():
    return HypersurfaceModel.perturbed_ellipsoid([1.0, SQRT2], BUMP, np.diag([1, 0, 1, 0.0]))


class TestModels:
    def test_validate(self, ellipsoid, bumped, pinched):
        for m in (ellipsoid, bumped, pinched):
            m.validate()
        assert ellipsoid.convex and bumped.convex and not pinched.convex

    def test_bad_perturbation(self):
        B = np.zeros((4, 4))
        B[0, 2] = B[2, 0] = 1.0  # couples q1 with p1
        with pytest.raises(InvariantError):
            HypersurfaceModel.perturbed_ellipsoid([1.0, 2.0], 0.1, B)
        with pytest.raises(ValueError):
            HypersurfaceModel.ellipsoid([1.0, -1.0])

    def test_from_function_matches(self, ellipsoid, rng):
        m = HypersurfaceModel.from_function(2, ellipsoid.H)
        z = rng.standard_normal(4)
        assert np.allclose(m.grad(z), ellipsoid.grad(z), atol=1e-6)
        assert np.allclose(m.hess(z), ellipsoid.hess(z), atol=1e-4)
        assert m.convex

    def test_from_spec(self):
        m = HypersurfaceModel.from_spec({"family": "ellipsoid", "axes": [1.0, 2.0]})
        assert m.n == 2
        with pytest.raises(ValueError):
            HypersurfaceModel.from_spec({"family": "torus"})


class TestFlow:
    def test_period(self, ellipsoid):
        z0 = ellipsoid.to_level(np.array([1.0, 0, 0, 0]))
        tr = reeb_flow(ellipsoid, z0, 1.0)
        assert np.allclose(tr(1.0), z0, atol=1e-9)
        assert tr.drift < 1e-10

    def test_off_level(self, ellipsoid):
        with pytest.raises(PreconditionError):
            reeb_flow(ellipsoid, np.array([1.0, 0, 0, 0]), 1.0)

    def test_linearized_symplectic(self, ellipsoid, ellipsoid_search):
        P = linearized_flow(ellipsoid, ellipsoid_search.chords[0])
        assert is_symplectic(P(P.T), tol=1e-8)

    def test_xi_frame(self, ellipsoid, ellipsoid_search):
        z = ellipsoid_search.chords[0].start
        E = xi_frame(ellipsoid, z)
        J = np.array([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0.0]])
        assert (J @ E[:, 0]) @ E[:, 1] == pytest.approx(1.0)
        assert abs((J @ E[:, 0]) @ z) < 1e-12


class TestEllipsoidChords:
    def test_two_chords(self, ellipsoid_search):
        Ts = [c.T for c in ellipsoid_search.chords]
        assert len(Ts) == 2
        assert abs(Ts[0] - 0.5) < 1e-8 and abs(Ts[1] - SQRT2 / 2) < 1e-8
        assert all(c.pair_verified for c in ellipsoid_search.chords)
        assert not ellipsoid_search.degenerate_families

    def test_brake_conditions(self, ellipsoid_search):
        for c in ellipsoid_search.chords:
            assert np.linalg.norm(c.start[2:]) == 0
            assert np.linalg.norm(c.end[2:]) < 1e-9

    def test_indices(self, ellipsoid, ellipsoid_search):
        want = [(HalfInt(3), HalfInt(3)), (HalfInt(5), HalfInt(5))]
        for c, w in zip(ellipsoid_search.chords, want):
            idx = chord_indices(ellipsoid, c)
            assert (idx.mu_I, idx.mu_minus_I) == w
            assert idx.route == "ambient" and idx.convex_along
            assert reduced_indices(ellipsoid, c) == w

    def test_round_sphere_degenerate(self):
        s = find_brake_chords(HypersurfaceModel.ellipsoid([1.0, 1.0]))
        assert not s.chords
        assert len(s.degenerate_families) == 1
        assert abs(s.degenerate_families[0].T - 0.5) < 1e-8

    def test_verify_pair_rejects(self, ellipsoid, ellipsoid_search):
        c = ellipsoid_search.chords[0]
        assert not verify_pair(ellipsoid, c.q0, 0.3)


class TestPerturbed:
    def test_convex_bump(self, bumped):
        s = find_brake_chords(bumped, T_scan=1.2)
        assert [round(c.T, 8) for c in s.chords] == [round(0.5 / (1 + BUMP), 8), round(SQRT2 / 2, 8)]
        ratios = bump_ratios()
        rep = dynamical_convexity_check(bumped, s.chords)
        assert rep.passed
        for c, r in zip(s.chords, ratios):
            cp = chord_path(bumped, c)
            got = winding_indices(cp, 20)
            assert got == [HalfInt.from_value(oracles.ellipsoid_mu(r, l)) for l in range(1, 21)]
            assert reduced_indices(bumped, c, cp) == (got[0], got[0])

    def test_pinched_violation(self, pinched):
        s = find_brake_chords(pinched, seeds=[[1.0, 0.0]], T_scan=0.8)
        assert len(s.chords) == 1 and abs(s.chords[0].T - 0.5) < 1e-8
        c = s.chords[0]
        r = pinched_ratio()
        ref = [HalfInt.from_value(oracles.ellipsoid_mu(r, l)) for l in range(1, 11)]
        idx = chord_indices(pinched, c)
        assert idx.mu_I == ref[0] == HalfInt(1)
        assert not idx.convex_along
        rep = dynamical_convexity_check(pinched, s.chords)
        assert not rep.passed
        assert rep.chords[0]["iterates"] == [str(x) for x in ref]
        assert any("below" in v for v in rep.violations)

    def test_convexity_needs_n2(self):
        m = HypersurfaceModel.ellipsoid([1.0])
        with pytest.raises(PreconditionError):
            dynamical_convexity_check(m, [])
