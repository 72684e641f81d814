"""The identification algorithms: eliminations, epochs, full runs."""

import numpy as np
import pytest

from linbai import (AlgoConfig, ArmSet, BudgetError, GBai, MixedPeace,
                    NoiseModel, P1Peace, P1Rage, StationarySequence,
                    UniformSampling, epoch_length, g_optimal_cached,
                    mahalanobis_sq, make_algorithm, malicious_sequence,
                    peace_elimination, rage_elimination, rho_value,
                    run_episode, run_gbai, run_uniform, soare_instance,
                    xy_optimal)

ZERO_NOISE = NoiseModel("truncated_gaussian", 0.0)


def canonical(d):
    return ArmSet(np.eye(d))


class TestRageElimination:
    def test_three_arm_worked_example(self):
        a = canonical(3)
        g, _ = g_optimal_cached(a)
        stats = {}
        des = rage_elimination(a, np.array([1.0, 0.6, 0.1]), 5, g,
                               stats=stats)
        assert [len(s) for s in stats["active"]] == [3, 3, 2]
        target = np.array([13 / 36, 13 / 36, 5 / 18])
        assert np.abs(des.weights - target).max() < 1e-3

    def test_zero_estimate_keeps_everything(self):
        a = canonical(3)
        g, _ = g_optimal_cached(a)
        stats = {}
        des = rage_elimination(a, np.zeros(3), 4, g, stats=stats)
        # all estimated gaps are 0, so every threshold keeps all arms and
        # the averaged design equals the full-set pairwise design
        assert stats["designs"] == 5  # phases i = 0..m
        xy, _ = xy_optimal(a, [0, 1, 2])
        expect = 0.5 * xy.weights + 0.5 * g.weights
        assert np.allclose(des.weights, expect, atol=5e-3)

    def test_estimated_best_arm_always_survives(self):
        rng = np.random.default_rng(0)
        a = ArmSet(rng.normal(size=(6, 3)))
        g, _ = g_optimal_cached(a)
        for _ in range(10):
            theta_hat = rng.normal(size=3)
            best = int(np.argmax(a.arms @ theta_hat))
            stats = {}
            rage_elimination(a, theta_hat, 6, g, fw=(300, 1e-7),
                             stats=stats)
            assert all(best in active for active in stats["active"])

    def test_design_is_half_mixed_with_g_optimal(self):
        a = canonical(4)
        g, _ = g_optimal_cached(a)
        des = rage_elimination(a, np.array([1.0, 0.1, 0.1, 0.1]), 5, g)
        assert np.all(des.weights >= 0.5 * g.weights - 1e-12)

    def test_matches_uniform_on_canonical_survivors(self):
        # on basis arms the per-phase pairwise designs are uniform over
        # the surviving arms (the successive-halving allocation)
        a = canonical(4)
        xy, _ = xy_optimal(a, [0, 1, 2, 3], iters=20000, tol=1e-9)
        assert np.allclose(xy.weights, 0.25, atol=5e-3)
        xy2, _ = xy_optimal(a, [0, 1], iters=20000, tol=1e-9)
        assert np.allclose(xy2.weights[:2], 0.5, atol=5e-3)


class TestPeaceElimination:
    def test_canonical_four_does_two_design_solves(self):
        a = canonical(4)
        g, _ = g_optimal_cached(a)
        stats = {}
        peace_elimination(a, np.array([0.9, 0.5, 0.3, 0.1]), g, stats=stats)
        assert stats["designs"] == 2
        assert stats["survivors"] == [4, 2, 1]

    def test_two_arms_single_design(self):
        a = canonical(2)
        g, _ = g_optimal_cached(a)
        stats = {}
        des = peace_elimination(a, np.array([1.0, 0.0]), g, stats=stats)
        assert stats["designs"] == 1
        xy, _ = xy_optimal(a, [0, 1])
        assert np.allclose(des.weights, 0.5 * xy.weights + 0.5 * g.weights,
                           atol=1e-9)

    def test_top_ranked_arm_always_survives(self):
        rng = np.random.default_rng(1)
        a = ArmSet(rng.normal(size=(7, 3)))
        g, _ = g_optimal_cached(a)
        for _ in range(10):
            theta_hat = rng.normal(size=3)
            stats = {}
            peace_elimination(a, theta_hat, g, fw=(300, 1e-7), stats=stats)
            assert all(n >= 1 for n in stats["survivors"])
            assert stats["survivors"][-1] == 1

    def test_phase_count_bounded_by_log_rho(self):
        a = canonical(8)
        g, _ = g_optimal_cached(a)
        stats = {}
        peace_elimination(a, np.arange(8, 0, -1.0), g, stats=stats)
        rho = rho_value(a)
        assert stats["designs"] <= np.ceil(np.log2(rho)) + 1e-9


class TestEpochLength:
    def test_canonical_four(self):
        # inf rho = 2K = 8 for K basis arms, so T=100 gives floor(100/3)
        assert epoch_length(canonical(4), 100) == 33

    def test_degenerate_budget_falls_back_to_one(self):
        assert epoch_length(canonical(4), 2) == 1

    def test_rho_closed_form_on_canonical_arms(self):
        for K in (2, 4, 8):
            assert rho_value(canonical(K)) == pytest.approx(2 * K, rel=2e-2)


class TestRoundProtocol:
    def _run_recording(self, algo, seq, noise, rng):
        designs = []
        for t in range(1, algo.T + 1):
            k = algo.choose(t)
            designs.append(algo.current_design)
            r = float(seq.theta_at(t) @ algo.arm_set.arms[k]) \
                + float(noise.sample(rng))
            algo.observe(t, k, r)
        return algo.recommend(), designs

    def test_gbai_design_is_constant(self):
        arms, theta = soare_instance(3, 0.5)
        seq = StationarySequence(theta, 50)
        algo = GBai(arms, 50, AlgoConfig(), np.random.default_rng(0))
        _, designs = self._run_recording(algo, seq, ZERO_NOISE,
                                         np.random.default_rng(1))
        assert all(d is designs[0] for d in designs)
        assert designs[0] is algo.g_design

    def test_p1peace_updates_exactly_at_epoch_starts(self):
        arms = canonical(4)
        T = 100
        seq = StationarySequence(np.array([1.0, 0.5, 0.2, 0.1]), T)
        algo = P1Peace(arms, T, AlgoConfig(fw_iters=300),
                       np.random.default_rng(0))
        assert algo.R == 33
        _, designs = self._run_recording(algo, seq, ZERO_NOISE,
                                         np.random.default_rng(1))
        changes = [t for t in range(2, T + 1)
                   if designs[t - 1] is not designs[t - 2]]
        assert changes == [34, 67, 100]  # t - 1 = c * 33
        assert designs[0] is algo.g_design  # lambda_1 = lambda*

    def test_p1rage_without_epoch_sync_refreshes_every_round(self):
        arms = canonical(3)
        seq = StationarySequence(np.array([1.0, 0.5, 0.2]), 6)
        algo = P1Rage(arms, 6, AlgoConfig(epoch_sync=False, fw_iters=100),
                      np.random.default_rng(0))
        _, designs = self._run_recording(algo, seq, ZERO_NOISE,
                                         np.random.default_rng(1))
        assert all(designs[t] is not designs[t - 1]
                   for t in range(1, 6))

    def test_sampling_floor_under_mixing(self):
        arms, theta = soare_instance(5, 0.5)
        T = 2000
        seq = StationarySequence(theta, T)
        algo = P1Rage(arms, T, AlgoConfig(fw_iters=300),
                      np.random.default_rng(2))
        noise = NoiseModel("uniform")
        rng = np.random.default_rng(3)
        g_w = algo.g_design.weights
        for t in range(1, T + 1):
            k = algo.choose(t)
            lam = algo.current_design
            assert np.all(lam.weights >= 0.5 * g_w - 1e-12)
            worst = max(mahalanobis_sq(x, lam) for x in arms.arms)
            assert worst <= 2 * arms.d * 1.02
            r = float(seq.theta_at(t) @ arms.arms[k]) + float(
                noise.sample(rng))
            algo.observe(t, k, r)
        algo.recommend()


class TestMixedPeace:
    def test_phase_grid_canonical_eight(self):
        arms = canonical(8)
        algo = MixedPeace(arms, 300, AlgoConfig(fw_iters=300),
                          np.random.default_rng(0))
        assert algo.R == 4  # ceil(log2(16))
        assert algo.N == 75

    def test_budget_too_small(self):
        with pytest.raises(BudgetError):
            MixedPeace(canonical(8), 3, AlgoConfig(fw_iters=100),
                       np.random.default_rng(0))

    def test_baseline_recommends_within_survivors(self):
        arms, seq = malicious_sequence(6, 600)
        algo = MixedPeace(arms, 600, AlgoConfig(mix_weight=0.0,
                                                fw_iters=300),
                          np.random.default_rng(0))
        rec = run_episode(algo, seq, NoiseModel("uniform"))
        assert rec in algo.survivors

    def test_mixed_keeps_g_weight_floor(self):
        arms = canonical(4)
        algo = MixedPeace(arms, 100, AlgoConfig(fw_iters=300),
                          np.random.default_rng(0))
        lam = algo.design_for_round(1)
        assert np.all(lam.weights >= 0.5 * algo.g_design.weights - 1e-12)


class TestFullRuns:
    def test_zero_noise_consistency_all_algorithms(self):
        arms, theta = soare_instance(4, 0.5)
        T = 400
        seq = StationarySequence(theta, T)
        for name in ("g_bai", "p1_rage", "p1_peace", "mixed_peace",
                     "uniform"):
            algo = make_algorithm(name, arms, T, AlgoConfig(fw_iters=300),
                                  np.random.default_rng(5))
            assert run_episode(algo, seq, ZERO_NOISE) == 0, name

    def test_gbai_uniform_frequencies_on_canonical_arms(self):
        # the G-optimal design of a basis is uniform
        arms = canonical(5)
        algo = GBai(arms, 10_000, AlgoConfig(), np.random.default_rng(6))
        counts = np.zeros(5)
        rng_noise = np.random.default_rng(7)
        seq = StationarySequence(np.array([0.5, 0.1, 0.0, 0.0, 0.0]),
                                 10_000)
        for t in range(1, 10_001):
            k = algo.choose(t)
            counts[k] += 1
            algo.observe(t, k, float(seq.theta_at(t) @ arms.arms[k])
                         + float(rng_noise.uniform(-1, 1)))
        freqs = counts / 10_000
        stderr = np.sqrt(0.2 * 0.8 / 10_000)
        assert np.all(np.abs(freqs - 0.2) <= 3 * stderr + 1e-3)

    def test_batched_equals_sequential_without_noise(self):
        arms, theta = soare_instance(4, 0.5)
        T = 300
        seq = StationarySequence(theta, T)
        for name in ("g_bai", "p1_rage", "p1_peace", "mixed_peace"):
            cfg = AlgoConfig(fw_iters=300)
            a1 = make_algorithm(name, arms, T, cfg,
                                np.random.default_rng(9))
            r1 = run_episode(a1, seq, ZERO_NOISE, batched=True)
            a2 = make_algorithm(name, arms, T, cfg,
                                np.random.default_rng(9))
            r2 = run_episode(a2, seq, ZERO_NOISE, batched=False)
            assert r1 == r2, name
            assert np.allclose(a1.state.sum, a2.state.sum, atol=1e-9)

    def test_same_seed_same_recommendation(self):
        arms, seq = malicious_sequence(5, 500)
        noise = NoiseModel("uniform")
        recs = set()
        for _ in range(3):
            algo = P1Rage(arms, 500, AlgoConfig(fw_iters=300),
                          np.random.default_rng(123))
            recs.add(run_episode(algo, seq, noise))
        assert len(recs) == 1

    def test_run_helpers(self):
        arms, theta = soare_instance(3, 0.5)
        seq = StationarySequence(theta, 200)
        assert run_gbai(arms, seq, ZERO_NOISE, 200,
                        np.random.default_rng(0)) == 0
        assert run_uniform(arms, seq, ZERO_NOISE, 200,
                           np.random.default_rng(0)) == 0


class TestConfigAndFactory:
    def test_unknown_algorithm(self):
        with pytest.raises(ValueError):
            make_algorithm("bandit", canonical(2), 10, AlgoConfig(),
                           np.random.default_rng(0))

    def test_peace_baseline_forces_zero_mix(self):
        algo = make_algorithm("peace_baseline", canonical(4), 100,
                              AlgoConfig(mix_weight=0.5, fw_iters=300),
                              np.random.default_rng(0))
        assert algo.config.mix_weight == 0.0

    def test_config_validation(self):
        with pytest.raises(ValueError):
            AlgoConfig(m=0)
        with pytest.raises(ValueError):
            AlgoConfig(mix_weight=1.5)

    def test_p1peace_forces_epoch_sync(self):
        algo = P1Peace(canonical(4), 100,
                       AlgoConfig(epoch_sync=False, fw_iters=300),
                       np.random.default_rng(0))
        assert algo.config.epoch_sync

    def test_budget_must_be_positive(self):
        with pytest.raises(ValueError):
            UniformSampling(canonical(2), 0, AlgoConfig(),
                            np.random.default_rng(0))
