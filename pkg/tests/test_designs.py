"""Arm sets, designs, and the Frank-Wolfe design solvers."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linbai import (ArmSet, Design, SpanError, g_optimal, g_optimal_cached,
                    mahalanobis_sq, mix, xy_optimal)


def canonical(d):
    return ArmSet(np.eye(d))


class TestArmSet:
    def test_needs_two_arms(self):
        with pytest.raises(ValueError):
            ArmSet(np.array([[1.0, 0.0]]))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            ArmSet(np.array([[1.0, 0.0], [np.nan, 1.0]]))

    def test_rejects_rank_deficient(self):
        with pytest.raises(SpanError):
            ArmSet(np.array([[1.0, 0.0], [2.0, 0.0]]))

    def test_shape_properties(self):
        a = canonical(3)
        assert a.K == 3 and a.d == 3

    def test_arms_read_only(self):
        a = canonical(3)
        with pytest.raises(ValueError):
            a.arms[0, 0] = 5.0


class TestDesign:
    def test_rejects_off_simplex(self):
        a = canonical(2)
        with pytest.raises(ValueError):
            Design(a, np.array([0.7, 0.7]))
        with pytest.raises(ValueError):
            Design(a, np.array([1.5, -0.5]))

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            Design(canonical(2), np.array([0.5, 0.25, 0.25]))

    def test_covariance(self):
        a = canonical(2)
        des = Design(a, np.array([0.25, 0.75]))
        assert np.allclose(des.covariance, np.diag([0.25, 0.75]))

    def test_solve_matches_inverse(self):
        rng = np.random.default_rng(0)
        a = ArmSet(rng.normal(size=(6, 3)))
        des = Design(a, np.full(6, 1 / 6))
        v = rng.normal(size=3)
        expected = np.linalg.solve(
            des.covariance + des.regularizer * np.eye(3), v)
        assert np.allclose(des.solve(v), expected)

    def test_sampling_frequencies(self):
        a = canonical(2)
        des = Design(a, np.array([0.2, 0.8]))
        rng = np.random.default_rng(1)
        draws = des.sample(rng, 20_000)
        assert abs(np.mean(draws == 1) - 0.8) < 0.01

    def test_scalar_sample_in_range(self):
        des = Design(canonical(3), np.array([0.0, 1.0, 0.0]))
        assert des.sample(np.random.default_rng(0)) == 1


class TestMahalanobis:
    def test_uniform_two_arms(self):
        # A = diag(1/2, 1/2), so ||e1||^2_{A^-1} = 2
        des = Design(canonical(2), np.array([0.5, 0.5]))
        assert mahalanobis_sq(np.array([1.0, 0.0]), des) == pytest.approx(
            2.0, rel=1e-6)

    def test_rejects_non_finite(self):
        des = Design(canonical(2), np.array([0.5, 0.5]))
        with pytest.raises(ValueError):
            mahalanobis_sq(np.array([np.inf, 0.0]), des)


class TestGOptimal:
    def test_canonical_arms_give_uniform(self):
        # the optimal design for a basis is uniform with value d
        des, value = g_optimal(canonical(4))
        assert value == pytest.approx(4.0, rel=1e-3)
        assert np.allclose(des.weights, 0.25, atol=1e-3)

    def test_value_close_to_dimension(self):
        # Kiefer-Wolfowitz: the optimum is exactly d for any spanning set
        rng = np.random.default_rng(7)
        for _ in range(3):
            arms = ArmSet(rng.normal(size=(12, 4)))
            _, value = g_optimal(arms)
            assert 4.0 - 1e-6 <= value <= 4.0 * 1.05

    def test_cached_returns_same_object(self):
        a = canonical(3)
        first = g_optimal_cached(a)
        second = g_optimal_cached(a)
        assert first[0] is second[0]


class TestXYOptimal:
    def test_two_canonical_arms(self):
        # min over lam of 1/lam1 + 1/lam2 = 4 at (1/2, 1/2)
        des, value = xy_optimal(canonical(2), [0, 1])
        assert value == pytest.approx(4.0, rel=1e-3)
        assert np.allclose(des.weights, 0.5, atol=5e-3)

    def test_active_pair_of_three(self):
        des, value = xy_optimal(canonical(3), [0, 1], iters=20000, tol=1e-9)
        assert value == pytest.approx(4.0, rel=1e-2)
        assert des.weights[2] < 0.02

    def test_needs_two_active(self):
        with pytest.raises(ValueError):
            xy_optimal(canonical(3), [1])

    def test_value_independent_of_active_order(self):
        a = canonical(3)
        _, v1 = xy_optimal(a, [0, 2, 1])
        _, v2 = xy_optimal(a, [2, 1, 0])
        assert v1 == pytest.approx(v2, rel=1e-12)


class TestMix:
    def test_convex_combination(self):
        a = canonical(2)
        d1 = Design(a, np.array([1.0, 0.0]))
        d2 = Design(a, np.array([0.0, 1.0]))
        assert np.allclose(mix(d1, d2, 0.25).weights, [0.25, 0.75])

    def test_rejects_bad_weight(self):
        a = canonical(2)
        d = Design(a, np.array([0.5, 0.5]))
        with pytest.raises(ValueError):
            mix(d, d, 1.5)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.integers(0, 10_000))
def test_g_optimal_never_beats_dimension(d, seed):
    # d is a hard lower bound on the worst-case norm for any design
    rng = np.random.default_rng(seed)
    arms = ArmSet(rng.normal(size=(3 * d, d)))
    _, value = g_optimal(arms, iters=500)
    assert value >= d - 1e-6


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_mahalanobis_nonnegative(seed):
    rng = np.random.default_rng(seed)
    arms = ArmSet(rng.normal(size=(5, 3)))
    w = rng.dirichlet(np.ones(5))
    des = Design(arms, w)
    assert mahalanobis_sq(rng.normal(size=3), des) >= 0.0
