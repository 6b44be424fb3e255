"""Evolution-strategy core: per-joint Gaussian search with adaptive exploration.

Each joint keeps an independent Gaussian over its basis weights.  One update
draws a batch of candidate policies, scores them on the reaching task, maps
costs to normalized exponential weights, and replaces every mean and
covariance by the weighted averages.  Covariance deviations are measured from
the pre-update mean, so exploration stretches along directions of consistent
improvement while the task is being solved and collapses once it is; flooring
the eigenvalues keeps every direction minimally explored.  The largest
covariance eigenvalue per joint serves as that joint's exploration magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arm import ArmModel
from .cost import CostWeights, joint_effort_weights
from .policy import BasisFunctionSet, activation_matrix, time_grid

__all__ = [
    "BlackboxTrace",
    "ExplorationState",
    "OptimizerConfig",
    "SampleBatch",
    "SearchDistribution",
    "SessionTrace",
    "costs_to_weights",
    "exploration_state",
    "run_blackbox_session",
    "run_session",
    "sample_batch",
    "update_distribution",
]

# Relative slack for symmetry / positive-semidefinite checks on covariances.
_PSD_TOL = 1e-8
_SIMPLEX_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class OptimizerConfig:
    """Search hyperparameters; defaults match the reaching experiments."""

    n_samples: int = 20
    eliteness: float = 10.0
    lambda_init: float = 0.05
    lambda_min: float = 0.05
    n_updates: int = 100

    def __post_init__(self):
        if self.n_samples < 2:
            raise ValueError("need at least two samples per update")
        if self.eliteness < 0.0:
            raise ValueError("eliteness must be nonnegative")
        if self.lambda_init <= 0.0:
            raise ValueError("initial exploration must be positive")
        if self.lambda_min < 0.0:
            raise ValueError("exploration floor must be nonnegative")
        if self.n_updates < 1:
            raise ValueError("need at least one update")


@dataclass(frozen=True, eq=False)
class SearchDistribution:
    """Independent Gaussian per block (joint): means (n, d), covariances (n, d, d).

    Construction symmetrizes each covariance, floors its eigenvalues at
    ``lambda_min``, and caches the eigendecomposition; matrices that are not
    positive semidefinite to begin with are rejected.
    """

    means: np.ndarray
    covariances: np.ndarray
    lambda_min: float = 0.0
    eigenvalues: np.ndarray = None   # (n, d), ascending
    eigenvectors: np.ndarray = None  # (n, d, d), columns match eigenvalues

    def __post_init__(self):
        means = np.array(self.means, dtype=float)
        if means.ndim != 2:
            raise ValueError(f"means must be (n_blocks, dim), got shape {means.shape}")
        n_blocks, dim = means.shape
        covs = np.array(self.covariances, dtype=float)
        if covs.shape != (n_blocks, dim, dim):
            raise ValueError(
                f"covariances must have shape {(n_blocks, dim, dim)}, got {covs.shape}"
            )
        if self.lambda_min < 0.0:
            raise ValueError("lambda_min must be nonnegative")
        scale = max(1.0, float(np.abs(covs).max()))
        if np.abs(covs - covs.transpose(0, 2, 1)).max() > _PSD_TOL * scale:
            raise ValueError("covariance blocks must be symmetric")
        covs = 0.5 * (covs + covs.transpose(0, 2, 1))
        values, vectors = np.linalg.eigh(covs)
        if values.min() < -_PSD_TOL * scale:
            raise ValueError("covariance block is not positive semidefinite")
        values = np.maximum(values, self.lambda_min)
        covs = np.einsum("mik,mk,mjk->mij", vectors, values, vectors)
        for name, value in (
            ("means", means),
            ("covariances", covs),
            ("eigenvalues", values),
            ("eigenvectors", vectors),
        ):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def n_blocks(self) -> int:
        return self.means.shape[0]

    @property
    def dim(self) -> int:
        return self.means.shape[1]

    @classmethod
    def initial(cls, n_blocks: int, dim: int, lambda_init: float, lambda_min: float = 0.0):
        """Zero means with isotropic covariance ``lambda_init * I`` per block."""
        if lambda_init <= 0.0:
            raise ValueError("initial exploration must be positive")
        covs = np.broadcast_to(lambda_init * np.eye(dim), (n_blocks, dim, dim))
        return cls(np.zeros((n_blocks, dim)), covs, lambda_min)


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Candidates of one update with their costs and normalized weights."""

    thetas: np.ndarray   # (n_samples, n_blocks, dim)
    costs: np.ndarray    # (n_samples,)
    weights: np.ndarray  # (n_samples,) simplex

    def __post_init__(self):
        thetas = np.asarray(self.thetas, dtype=float)
        costs = np.asarray(self.costs, dtype=float).reshape(-1)
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if thetas.ndim != 3:
            raise ValueError(f"thetas must be 3-D, got shape {thetas.shape}")
        if costs.shape[0] != thetas.shape[0] or weights.shape[0] != thetas.shape[0]:
            raise ValueError("costs and weights must match the number of samples")
        for name, value in (("thetas", thetas), ("costs", costs), ("weights", weights)):
            object.__setattr__(self, name, value)


@dataclass(frozen=True, eq=False)
class ExplorationState:
    """Per-block exploration magnitudes (top eigenvalues) and their split."""

    magnitudes: np.ndarray
    relative: np.ndarray
    total: float


def sample_batch(distribution: SearchDistribution, n_samples: int, rng) -> np.ndarray:
    """Draw candidate parameter tensors, blocks sampled independently.

    ``rng`` may be a seed or a ``numpy.random.Generator``; the draw is
    deterministic given both the seed and the distribution.
    """
    if n_samples < 2:
        raise ValueError("need at least two samples per update")
    rng = np.random.default_rng(rng)
    # A = V sqrt(diag(e)) gives A A' = covariance; eigenvalues are already
    # floored at construction so the square root is safe.
    transform = distribution.eigenvectors * np.sqrt(distribution.eigenvalues)[:, None, :]
    z = rng.standard_normal((n_samples,) + distribution.means.shape)
    return distribution.means + np.einsum("mij,kmj->kmi", transform, z)


def costs_to_weights(costs, eliteness: float) -> np.ndarray:
    """Map costs to a simplex by range-normalized exponentiation.

    The best cost gets weight proportional to 1, the worst exp(-eliteness).
    Equal costs (and eliteness 0) give uniform weights.  Invariant under any
    increasing affine rescaling of the costs.
    """
    c = np.asarray(costs, dtype=float).reshape(-1)
    if c.size < 2:
        raise ValueError("need at least two costs")
    if eliteness < 0.0:
        raise ValueError("eliteness must be nonnegative")
    lo = c.min()
    hi = c.max()
    if hi == lo:
        return np.full(c.size, 1.0 / c.size)
    raw = np.exp(-eliteness * (c - lo) / (hi - lo))
    return raw / raw.sum()


def update_distribution(distribution: SearchDistribution, batch: SampleBatch) -> SearchDistribution:
    """Weighted-average update of every block's mean and covariance.

    The new covariance averages outer products of deviations from the
    PRE-update mean, so a consistent cost gradient stretches exploration
    along itself.  Eigenvalue flooring is applied by the constructor.
    """
    weights = batch.weights
    if weights.min() < 0.0 or abs(weights.sum() - 1.0) > _SIMPLEX_TOL:
        raise ValueError("batch weights must form a simplex")
    if batch.thetas.shape[1:] != distribution.means.shape:
        raise ValueError(
            f"batch blocks {batch.thetas.shape[1:]} do not match "
            f"distribution {distribution.means.shape}"
        )
    new_means = np.einsum("k,kmb->mb", weights, batch.thetas)
    deviations = batch.thetas - distribution.means[None, :, :]
    new_covs = np.einsum("k,kmi,kmj->mij", weights, deviations, deviations)
    return SearchDistribution(new_means, new_covs, distribution.lambda_min)


def exploration_state(distribution: SearchDistribution) -> ExplorationState:
    """Summarize exploration as each block's top covariance eigenvalue."""
    magnitudes = distribution.eigenvalues[:, -1].copy()
    total = float(magnitudes.sum())
    return ExplorationState(magnitudes, magnitudes / total, total)


def _batch_cost_terms(arm, activations, thetas, dt, target, weights):
    """Cost terms for a stack of policies without materializing trajectories.

    Mirrors rollout + evaluate_cost exactly (same operations in the same
    order) but is vectorized over the sample axis.  Returns (terms, distance)
    where terms has columns distance, comfort, acceleration, total.
    """
    acc = np.einsum("tb,kmb->ktm", activations, thetas)
    vel = np.zeros_like(acc)
    vel[:, 1:] = dt * np.cumsum(acc[:, :-1], axis=1)
    final_angles = dt * vel[:, :-1].sum(axis=1)
    headings = np.cumsum(final_angles, axis=1)
    tip_x = np.cos(headings) @ arm.link_lengths
    tip_y = np.sin(headings) @ arm.link_lengths
    miss_x = tip_x - target[0]
    miss_y = tip_y - target[1]
    squared_miss = miss_x**2 + miss_y**2
    distance_term = weights.distance * squared_miss
    comfort_term = weights.comfort * final_angles.max(axis=1)
    effort = joint_effort_weights(thetas.shape[1])
    acceleration_term = (
        weights.acceleration * np.einsum("ktm,m->k", acc**2, effort) / effort.sum()
    )
    total = distance_term + comfort_term + acceleration_term
    terms = np.stack([distance_term, comfort_term, acceleration_term, total], axis=1)
    return terms, np.sqrt(squared_miss)


@dataclass(frozen=True, eq=False)
class SessionTrace:
    """Per-update record of one reaching session.

    Row u (0-based) of every per-update array describes the state BEFORE
    update u + 1 was applied, so row 0 holds the initial distribution; the
    ``final_*`` fields describe the state after the last update.  Update
    indices reported elsewhere are 1-based under this convention.
    """

    target: np.ndarray
    seed: int
    lambdas: np.ndarray       # (n_updates, n_joints) exploration magnitudes
    relative: np.ndarray      # (n_updates, n_joints)
    total: np.ndarray         # (n_updates,)
    mean_costs: np.ndarray    # (n_updates, 4) mean-policy cost terms
    final_lambdas: np.ndarray
    final_relative: np.ndarray
    final_total: float
    final_mean_costs: np.ndarray  # (4,)
    final_distance: float

    @property
    def n_updates(self) -> int:
        return self.lambdas.shape[0]


def run_session(
    arm: ArmModel,
    basis: BasisFunctionSet,
    target,
    optimizer: OptimizerConfig | None = None,
    cost_weights: CostWeights | None = None,
    dt: float = 0.01,
    seed: int = 0,
) -> SessionTrace:
    """Optimize reaching one target from scratch and trace exploration.

    Every update samples ``optimizer.n_samples`` candidate policies, scores
    full rollouts, and applies the weighted-average update.  The trace records
    the exploration state and the mean policy's cost before each update plus
    the final state after the last one.
    """
    opt = optimizer if optimizer is not None else OptimizerConfig()
    w = cost_weights if cost_weights is not None else CostWeights()
    goal = np.asarray(target, dtype=float).reshape(2)
    rng = np.random.default_rng(seed)
    grid = time_grid(basis, dt)
    activations = activation_matrix(basis, grid)
    distribution = SearchDistribution.initial(
        arm.n_joints, basis.n_basis, opt.lambda_init, opt.lambda_min
    )

    n_joints = arm.n_joints
    lambdas = np.empty((opt.n_updates, n_joints))
    relative = np.empty((opt.n_updates, n_joints))
    total = np.empty(opt.n_updates)
    mean_costs = np.empty((opt.n_updates, 4))

    for update in range(opt.n_updates):
        state = exploration_state(distribution)
        lambdas[update] = state.magnitudes
        relative[update] = state.relative
        total[update] = state.total
        terms, _ = _batch_cost_terms(
            arm, activations, distribution.means[None], dt, goal, w
        )
        mean_costs[update] = terms[0]

        thetas = sample_batch(distribution, opt.n_samples, rng)
        sample_terms, _ = _batch_cost_terms(arm, activations, thetas, dt, goal, w)
        costs = sample_terms[:, 3]
        weights = costs_to_weights(costs, opt.eliteness)
        distribution = update_distribution(
            distribution, SampleBatch(thetas, costs, weights)
        )

    final_state = exploration_state(distribution)
    final_terms, final_distance = _batch_cost_terms(
        arm, activations, distribution.means[None], dt, goal, w
    )
    return SessionTrace(
        target=goal,
        seed=seed,
        lambdas=lambdas,
        relative=relative,
        total=total,
        mean_costs=mean_costs,
        final_lambdas=final_state.magnitudes,
        final_relative=final_state.relative,
        final_total=final_state.total,
        final_mean_costs=final_terms[0],
        final_distance=float(final_distance[0]),
    )


@dataclass(frozen=True, eq=False)
class BlackboxTrace:
    """Per-update snapshots of a single-block optimization.

    Same convention as SessionTrace: row u is the state before update u + 1;
    the final fields hold the state after the last update.
    """

    means: np.ndarray        # (n_updates, dim)
    covariances: np.ndarray  # (n_updates, dim, dim)
    costs: np.ndarray        # (n_updates,) cost of the running mean
    final_mean: np.ndarray
    final_covariance: np.ndarray
    final_cost: float

    @property
    def n_updates(self) -> int:
        return self.means.shape[0]


def run_blackbox_session(
    cost_fn,
    initial_mean,
    lambda_init: float,
    lambda_min: float = 0.0,
    n_samples: int = 15,
    eliteness: float = 10.0,
    n_updates: int = 20,
    seed: int = 0,
) -> BlackboxTrace:
    """Run the same update rule on a plain parameter vector.

    ``cost_fn`` maps a (dim,) vector to a scalar cost.  Used by the 2-D
    illustration of adaptive exploration and by diagnostic tests; the reaching
    sessions use :func:`run_session` instead.
    """
    mean = np.asarray(initial_mean, dtype=float).reshape(-1)
    dim = mean.size
    distribution = SearchDistribution(
        mean[None, :],
        np.broadcast_to(lambda_init * np.eye(dim), (1, dim, dim)),
        lambda_min,
    )
    rng = np.random.default_rng(seed)

    means = np.empty((n_updates, dim))
    covariances = np.empty((n_updates, dim, dim))
    costs = np.empty(n_updates)
    for update in range(n_updates):
        means[update] = distribution.means[0]
        covariances[update] = distribution.covariances[0]
        costs[update] = float(cost_fn(distribution.means[0]))

        thetas = sample_batch(distribution, n_samples, rng)
        sample_costs = np.array([float(cost_fn(theta[0])) for theta in thetas])
        weights = costs_to_weights(sample_costs, eliteness)
        distribution = update_distribution(
            distribution, SampleBatch(thetas, sample_costs, weights)
        )
    return BlackboxTrace(
        means=means,
        covariances=covariances,
        costs=costs,
        final_mean=distribution.means[0].copy(),
        final_covariance=distribution.covariances[0].copy(),
        final_cost=float(cost_fn(distribution.means[0])),
    )
