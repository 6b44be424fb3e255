"""Optimizer core: weight mapping, sampling, the weighted-average update
against a brute-force oracle, exploration summaries, and full sessions."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdff.arm import ArmModel
from pdff.cost import CostWeights, evaluate_cost
from pdff.optimizer import (
    OptimizerConfig,
    SampleBatch,
    SearchDistribution,
    _batch_cost_terms,
    costs_to_weights,
    exploration_state,
    run_blackbox_session,
    run_session,
    sample_batch,
    update_distribution,
)
from pdff.policy import BasisFunctionSet, activation_matrix, rollout, time_grid

# Frozen from the exponentiation formula evaluated by hand for costs
# [0, 5, 10] at eliteness 10: exp(-10 * [0, 1/2, 1]) renormalized.
WEIGHTS_0_5_10 = (0.9932623568421745, 0.006692549116589288, 4.5094041236354885e-05)


def brute_force_update(means, thetas, weights):
    """Reference mean/covariance update written as explicit loops."""
    n_samples, n_blocks, dim = thetas.shape
    new_means = np.zeros((n_blocks, dim))
    new_covs = np.zeros((n_blocks, dim, dim))
    for m in range(n_blocks):
        for k in range(n_samples):
            new_means[m] += weights[k] * thetas[k, m]
        for k in range(n_samples):
            dev = thetas[k, m] - means[m]
            for i in range(dim):
                for j in range(dim):
                    new_covs[m, i, j] += weights[k] * dev[i] * dev[j]
    return new_means, new_covs


class TestCostsToWeights:
    def test_worked_example(self):
        weights = costs_to_weights([0.0, 5.0, 10.0], 10.0)
        for got, expected in zip(weights, WEIGHTS_0_5_10):
            assert got == pytest.approx(expected, rel=1e-12)
        assert weights.sum() == pytest.approx(1.0, abs=1e-15)

    def test_equal_costs_give_uniform(self):
        assert np.array_equal(costs_to_weights([3.0] * 5, 10.0), np.full(5, 0.2))

    def test_zero_eliteness_gives_uniform(self):
        assert np.array_equal(
            costs_to_weights([1.0, 100.0, 2.0, 7.0], 0.0), np.full(4, 0.25)
        )

    # Costs are sixteenths and the transform is a power-of-two scale plus a
    # sixteenths shift, so scale * J + shift is computed without rounding and
    # the invariance can be asserted at 1e-12.  With free floats the transform
    # itself can absorb a tiny cost spread (J + shift == shift) and the
    # weights then legitimately collapse to uniform.
    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.integers(-1600, 1600).map(lambda n: n / 16.0),
                 min_size=2, max_size=20),
        st.integers(-6, 6).map(lambda e: 2.0 ** e),
        st.integers(-80, 80).map(lambda n: n / 16.0),
    )
    def test_affine_invariance(self, costs, scale, shift):
        base = costs_to_weights(costs, 10.0)
        rescaled = costs_to_weights(scale * np.asarray(costs) + shift, 10.0)
        assert np.abs(base - rescaled).max() < 1e-12

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-100.0, 100.0), min_size=2, max_size=20))
    def test_monotone_in_cost(self, costs):
        weights = costs_to_weights(costs, 10.0)
        order = np.argsort(costs)
        ranked = weights[order]
        assert np.all(np.diff(ranked) <= 1e-15)

    def test_validation(self):
        with pytest.raises(ValueError, match="at least two"):
            costs_to_weights([1.0], 10.0)
        with pytest.raises(ValueError, match="nonnegative"):
            costs_to_weights([1.0, 2.0], -1.0)


class TestSearchDistribution:
    def test_initial_is_isotropic(self):
        dist = SearchDistribution.initial(6, 5, 0.05, 0.05)
        assert np.all(dist.means == 0.0)
        for m in range(6):
            assert np.array_equal(dist.covariances[m], 0.05 * np.eye(5))
        assert np.all(dist.eigenvalues == 0.05)

    def test_floor_lifts_small_eigenvalues(self):
        covs = np.array([np.diag([1e-6, 0.4])])
        dist = SearchDistribution(np.zeros((1, 2)), covs, lambda_min=0.05)
        assert np.array_equal(dist.eigenvalues[0], [0.05, 0.4])
        assert np.abs(dist.covariances[0] - np.diag([0.05, 0.4])).max() < 1e-15

    def test_rejects_asymmetric_and_indefinite(self):
        with pytest.raises(ValueError, match="symmetric"):
            SearchDistribution(np.zeros((1, 2)), np.array([[[1.0, 0.5], [0.0, 1.0]]]))
        with pytest.raises(ValueError, match="positive semidefinite"):
            SearchDistribution(
                np.zeros((1, 2)), np.array([[[1.0, 0.0], [0.0, -1.0]]])
            )

    def test_shape_validation(self):
        with pytest.raises(ValueError, match="means"):
            SearchDistribution(np.zeros(5), np.zeros((1, 5, 5)))
        with pytest.raises(ValueError, match="covariances"):
            SearchDistribution(np.zeros((2, 5)), np.zeros((2, 4, 4)))

    def test_arrays_read_only(self):
        dist = SearchDistribution.initial(2, 3, 1.0)
        with pytest.raises(ValueError):
            dist.means[0, 0] = 1.0
        with pytest.raises(ValueError):
            dist.covariances[0, 0, 0] = 2.0


class TestSampleBatch:
    def test_deterministic_given_seed(self):
        dist = SearchDistribution.initial(6, 5, 0.05)
        a = sample_batch(dist, 20, 123)
        b = sample_batch(dist, 20, 123)
        assert np.array_equal(a, b)
        c = sample_batch(dist, 20, 124)
        assert not np.array_equal(a, c)

    def test_sample_moments_converge(self):
        rng = np.random.default_rng(9)
        rotation = np.linalg.qr(rng.normal(size=(3, 3)))[0]
        cov = rotation @ np.diag([0.5, 0.1, 0.02]) @ rotation.T
        means = np.array([[1.0, -2.0, 0.5]])
        dist = SearchDistribution(means, cov[None])
        draws = sample_batch(dist, 100_000, 42)[:, 0, :]
        assert np.abs(draws.mean(axis=0) - means[0]).max() < 0.01
        sample_cov = np.cov(draws.T)
        assert np.abs(sample_cov - cov).max() < 0.01

    def test_isotropic_variance_within_three_percent(self):
        dist = SearchDistribution.initial(1, 5, 0.05)
        draws = sample_batch(dist, 100_000, 7)[:, 0, :]
        variances = draws.var(axis=0)
        assert np.abs(variances - 0.05).max() < 0.03 * 0.05

    def test_vanishing_exploration_collapses_to_mean(self):
        means = np.array([[2.0, -1.0]])
        dist = SearchDistribution(means, 1e-30 * np.eye(2)[None])
        draws = sample_batch(dist, 50, 0)
        assert np.abs(draws - means).max() < 1e-12

    def test_requires_two_samples(self):
        dist = SearchDistribution.initial(1, 2, 1.0)
        with pytest.raises(ValueError, match="at least two"):
            sample_batch(dist, 1, 0)


class TestUpdateDistribution:
    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(17)
        dist = SearchDistribution(
            rng.normal(size=(6, 5)),
            np.broadcast_to(0.05 * np.eye(5), (6, 5, 5)),
        )
        thetas = sample_batch(dist, 20, 5)
        costs = rng.normal(size=20)
        weights = costs_to_weights(costs, 10.0)
        updated = update_distribution(dist, SampleBatch(thetas, costs, weights))
        expected_means, expected_covs = brute_force_update(dist.means, thetas, weights)
        assert np.abs(updated.means - expected_means).max() < 1e-12
        # lambda_min is 0 here, so no flooring obscures the raw average
        assert np.abs(updated.covariances - expected_covs).max() < 1e-12

    def test_delta_weights_pick_one_sample(self):
        dist = SearchDistribution.initial(2, 3, 0.5)
        thetas = sample_batch(dist, 4, 11)
        weights = np.array([0.0, 0.0, 1.0, 0.0])
        updated = update_distribution(
            dist, SampleBatch(thetas, np.zeros(4), weights)
        )
        assert np.array_equal(updated.means, thetas[2])
        for m in range(2):
            dev = thetas[2, m] - dist.means[m]
            assert np.abs(updated.covariances[m] - np.outer(dev, dev)).max() < 1e-12

    def test_uniform_weights_keep_mean_approximately(self):
        dist = SearchDistribution.initial(1, 4, 0.05)
        thetas = sample_batch(dist, 100_000, 3)
        weights = np.full(100_000, 1e-5)
        updated = update_distribution(dist, SampleBatch(thetas, np.zeros(100_000), weights))
        assert np.abs(updated.means).max() < 0.01

    def test_floor_applies_after_update(self):
        dist = SearchDistribution.initial(3, 5, 0.05, lambda_min=0.05)
        thetas = sample_batch(dist, 20, 2)
        weights = costs_to_weights(np.arange(20.0), 10.0)
        updated = update_distribution(dist, SampleBatch(thetas, np.arange(20.0), weights))
        assert updated.eigenvalues.min() >= 0.05 - 1e-12
        assert updated.lambda_min == 0.05

    def test_rejects_non_simplex_weights(self):
        dist = SearchDistribution.initial(1, 2, 1.0)
        thetas = sample_batch(dist, 3, 0)
        with pytest.raises(ValueError, match="simplex"):
            update_distribution(dist, SampleBatch(thetas, np.zeros(3), np.array([0.5, 0.2, 0.2])))

    def test_rejects_mismatched_blocks(self):
        dist = SearchDistribution.initial(2, 3, 1.0)
        wrong = np.zeros((4, 1, 3))
        with pytest.raises(ValueError, match="do not match"):
            update_distribution(
                dist, SampleBatch(wrong, np.zeros(4), np.full(4, 0.25))
            )


class TestExplorationState:
    def test_diagonal_covariance(self):
        covs = np.array([np.diag([0.05, 0.2, 0.05, 0.05, 0.05])])
        dist = SearchDistribution(np.zeros((1, 5)), covs)
        state = exploration_state(dist)
        assert state.magnitudes[0] == 0.2
        assert state.total == 0.2

    def test_rotated_covariance(self):
        rng = np.random.default_rng(23)
        rotation = np.linalg.qr(rng.normal(size=(5, 5)))[0]
        cov = rotation @ np.diag([0.3, 0.05, 0.05, 0.05, 0.05]) @ rotation.T
        dist = SearchDistribution(np.zeros((1, 5)), cov[None])
        state = exploration_state(dist)
        assert state.magnitudes[0] == pytest.approx(0.3, abs=1e-10)

    def test_relative_is_a_simplex(self):
        dist = SearchDistribution.initial(6, 5, 0.05)
        state = exploration_state(dist)
        assert state.relative.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.abs(state.relative - 1.0 / 6.0).max() < 1e-12


class TestBatchCostTerms:
    def test_mirrors_rollout_and_evaluate_cost(self):
        arm = ArmModel.from_morphology("human")
        basis = BasisFunctionSet()
        weights = CostWeights()
        grid = time_grid(basis, 0.01)
        activations = activation_matrix(basis, grid)
        rng = np.random.default_rng(31)
        thetas = rng.normal(0.0, 10.0, (8, 6, 5))
        terms, distances = _batch_cost_terms(
            arm, activations, thetas, 0.01, np.array([0.0, 0.85]), weights
        )
        for k in range(8):
            trajectory = rollout(arm, basis, thetas[k], 0.01)
            breakdown = evaluate_cost(trajectory, (0.0, 0.85), weights)
            assert terms[k, 0] == pytest.approx(breakdown.distance_term, rel=1e-12, abs=1e-12)
            assert terms[k, 1] == pytest.approx(breakdown.comfort_term, rel=1e-12, abs=1e-12)
            assert terms[k, 2] == pytest.approx(breakdown.acceleration_term, rel=1e-12, abs=1e-14)
            assert terms[k, 3] == pytest.approx(breakdown.total, rel=1e-12, abs=1e-12)
            miss = trajectory.path[-1] - [0.0, 0.85]
            assert distances[k] == pytest.approx(np.linalg.norm(miss), rel=1e-12)


class TestRunSession:
    def test_target_at_start_pose_stays_solved(self):
        arm = ArmModel.from_morphology("human")
        trace = run_session(arm, BasisFunctionSet(), (1.0, 0.0), seed=0)
        assert trace.mean_costs[0, 0] == 0.0
        assert np.all(trace.mean_costs[:, 0] < 0.01)

    def test_reaches_anchor_target(self):
        arm = ArmModel.from_morphology("human")
        for seed in (0, 1, 2):
            trace = run_session(arm, BasisFunctionSet(), (0.0, 0.85), seed=seed)
            assert trace.final_distance < 0.05

    def test_exploration_rises_then_falls(self):
        arm = ArmModel.from_morphology("human")
        trace = run_session(arm, BasisFunctionSet(), (0.0, 0.85), seed=0)
        assert trace.total[0] == 0.3
        assert trace.total.max() > trace.total[0]
        assert trace.final_total < trace.total.max()

    def test_trace_shapes_and_convention(self):
        arm = ArmModel.from_morphology("human")
        optimizer = OptimizerConfig(n_updates=7)
        trace = run_session(arm, BasisFunctionSet(), (0.0, 0.85), optimizer=optimizer, seed=0)
        assert trace.n_updates == 7
        assert trace.lambdas.shape == (7, 6)
        assert trace.mean_costs.shape == (7, 4)
        # row 0 is the untouched initial state
        assert np.all(trace.lambdas[0] == 0.05)
        assert np.abs(trace.relative[0] - 1.0 / 6.0).max() < 1e-12

    def test_bitwise_reproducible(self):
        arm = ArmModel.from_morphology("human")
        optimizer = OptimizerConfig(n_updates=10)
        a = run_session(arm, BasisFunctionSet(), (0.0, 0.85), optimizer=optimizer, seed=5)
        b = run_session(arm, BasisFunctionSet(), (0.0, 0.85), optimizer=optimizer, seed=5)
        assert np.array_equal(a.lambdas, b.lambdas)
        assert np.array_equal(a.mean_costs, b.mean_costs)
        assert a.final_distance == b.final_distance

    def test_config_validation(self):
        with pytest.raises(ValueError, match="at least two samples"):
            OptimizerConfig(n_samples=1)
        with pytest.raises(ValueError, match="eliteness"):
            OptimizerConfig(eliteness=-1.0)
        with pytest.raises(ValueError, match="positive"):
            OptimizerConfig(lambda_init=0.0)
        with pytest.raises(ValueError, match="floor"):
            OptimizerConfig(lambda_min=-0.1)
        with pytest.raises(ValueError, match="at least one update"):
            OptimizerConfig(n_updates=0)


class TestRunBlackboxSession:
    def test_costs_column_tracks_the_mean(self):
        trace = run_blackbox_session(
            lambda theta: float(np.linalg.norm(theta)),
            [10.0, 10.0], lambda_init=9.0, n_updates=5, seed=0,
        )
        assert trace.costs[0] == pytest.approx(np.hypot(10.0, 10.0), rel=1e-12)
        for u in range(5):
            assert trace.costs[u] == pytest.approx(
                np.linalg.norm(trace.means[u]), rel=1e-12
            )
        assert trace.final_cost == pytest.approx(
            np.linalg.norm(trace.final_mean), rel=1e-12
        )

    def test_mean_norm_decreases_from_a_slope(self):
        # Averaged over seeds, the mean walks toward the minimum during
        # the first updates.
        start_norm = np.hypot(10.0, 10.0)
        norms = np.zeros(10)
        for seed in range(20):
            trace = run_blackbox_session(
                lambda theta: float(np.linalg.norm(theta)),
                [10.0, 10.0], lambda_init=9.0, n_updates=10, seed=seed,
            )
            norms += np.linalg.norm(trace.means, axis=1)
        norms /= 20.0
        assert norms[0] == pytest.approx(start_norm, rel=1e-12)
        assert np.all(np.diff(norms) < 0.0)

    def test_deterministic(self):
        cost = lambda theta: float(np.linalg.norm(theta))
        a = run_blackbox_session(cost, [3.0, 4.0], lambda_init=1.0, seed=2)
        b = run_blackbox_session(cost, [3.0, 4.0], lambda_init=1.0, seed=2)
        assert np.array_equal(a.means, b.means)
        assert np.array_equal(a.covariances, b.covariances)
