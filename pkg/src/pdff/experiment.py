"""Campaign orchestration and exploration statistics.

A campaign runs many independent reaching sessions (all targets times a
number of repetitions), averages the per-joint exploration curves, finds each
joint's exploration peak, and derives the order in which joints become the
dominant direction of search.  Session curves can additionally be aligned by
dynamic time warping before computing cross-session variance, so sessions
that go through the same phases at slightly different speeds do not blur each
other out.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .arm import ArmModel, TargetSet
from .cost import CostWeights
from .optimizer import OptimizerConfig, SessionTrace, run_session
from .policy import BasisFunctionSet

__all__ = [
    "AlignedVariance",
    "CampaignResult",
    "aligned_variance",
    "dtw_align",
    "dtw_distance",
    "freeing_order",
    "run_campaign",
]

# A peak at update 1 at (or below) the initial uniform share, within this
# margin, means the joint never rose above its initialization.
NEVER_FREED_CEILING = 1.0 / 6.0 + 0.02


@dataclass(frozen=True, eq=False)
class CampaignResult:
    """Cross-session averages and per-joint peak records.

    Per-update rows follow the SessionTrace convention: row u (0-based) is
    the state before update u + 1, so peak updates are 1-based and a peak at
    update 1 points at the initial distribution.
    """

    morphology: str
    mean_lambdas: np.ndarray    # (n_updates, n_joints)
    mean_relative: np.ndarray   # (n_updates, n_joints)
    mean_total: np.ndarray      # (n_updates,)
    peak_magnitude: np.ndarray  # (n_joints,) max of the averaged relative curve
    peak_update: np.ndarray     # (n_joints,) 1-based argmax
    never_freed: np.ndarray     # (n_joints,) bool
    sessions: tuple[SessionTrace, ...]

    @property
    def n_updates(self) -> int:
        return self.mean_relative.shape[0]

    @property
    def n_joints(self) -> int:
        return self.mean_relative.shape[1]


def _run_campaign_session(args):
    arm, basis, target, optimizer, cost_weights, dt, seed = args
    return run_session(
        arm, basis, target,
        optimizer=optimizer, cost_weights=cost_weights, dt=dt, seed=seed,
    )


def run_campaign(
    arm: ArmModel | str,
    targets: TargetSet,
    sessions_per_target: int = 10,
    base_seed: int = 0,
    optimizer: OptimizerConfig | None = None,
    basis: BasisFunctionSet | None = None,
    cost_weights: CostWeights | None = None,
    dt: float = 0.01,
    jobs: int = 1,
) -> CampaignResult:
    """Run sessions_per_target sessions for every target and aggregate.

    Session i (targets outer, repetitions inner) is seeded ``base_seed + i``,
    so campaigns are reproducible and individual sessions can be re-run in
    isolation.  ``jobs`` > 1 distributes sessions over processes; the
    aggregation order, and therefore the result, does not depend on it.
    """
    if isinstance(arm, str):
        arm = ArmModel.from_morphology(arm)
    if sessions_per_target < 1:
        raise ValueError("need at least one session per target")
    opt = optimizer if optimizer is not None else OptimizerConfig()
    bas = basis if basis is not None else BasisFunctionSet()
    weights = cost_weights if cost_weights is not None else CostWeights()

    session_args = []
    for point in targets.points:
        for _ in range(sessions_per_target):
            seed = base_seed + len(session_args)
            session_args.append((arm, bas, point, opt, weights, dt, seed))

    if jobs > 1:
        chunk = max(1, len(session_args) // (jobs * 4))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            traces = list(pool.map(_run_campaign_session, session_args, chunksize=chunk))
    else:
        traces = [_run_campaign_session(args) for args in session_args]

    relative = np.stack([trace.relative for trace in traces])
    mean_relative = relative.mean(axis=0)
    mean_lambdas = np.stack([trace.lambdas for trace in traces]).mean(axis=0)
    mean_total = np.stack([trace.total for trace in traces]).mean(axis=0)

    peak_update = mean_relative.argmax(axis=0) + 1
    peak_magnitude = mean_relative.max(axis=0)
    never_freed = (peak_update == 1) & (peak_magnitude <= NEVER_FREED_CEILING)

    return CampaignResult(
        morphology=arm.name or "custom",
        mean_lambdas=mean_lambdas,
        mean_relative=mean_relative,
        mean_total=mean_total,
        peak_magnitude=peak_magnitude,
        peak_update=peak_update,
        never_freed=never_freed,
        sessions=tuple(traces),
    )


def freeing_order(result: CampaignResult) -> np.ndarray:
    """1-based joint labels sorted by peak update, proximal first on ties."""
    labels = np.arange(1, result.n_joints + 1)
    order = np.lexsort((labels, result.peak_update))
    return labels[order]


def dtw_align(reference, query):
    """Align ``query`` to ``reference`` by dynamic time warping.

    Uses the symmetric step pattern (diagonal, reference advance, query
    advance) with squared-difference local cost; ties in the traceback prefer
    the diagonal.  Returns ``(warped, path)`` where ``warped`` resamples the
    query onto the reference index (averaging query values that map to the
    same reference step) and ``path`` is the list of (reference, query) index
    pairs from (0, 0) to (n - 1, m - 1).
    """
    r = np.asarray(reference, dtype=float).reshape(-1)
    q = np.asarray(query, dtype=float).reshape(-1)
    if r.size == 0 or q.size == 0:
        raise ValueError("cannot align empty series")
    n, m = r.size, q.size
    local = (r[:, None] - q[None, :]) ** 2
    table = np.full((n + 1, m + 1), np.inf)
    table[0, 0] = 0.0
    for i in range(1, n + 1):
        row = table[i]
        above = table[i - 1]
        cost_row = local[i - 1]
        for j in range(1, m + 1):
            row[j] = cost_row[j - 1] + min(above[j - 1], above[j], row[j - 1])

    path = [(n - 1, m - 1)]
    i, j = n, m
    while (i, j) != (1, 1):
        moves = (
            (table[i - 1, j - 1], i - 1, j - 1),  # diagonal preferred on ties
            (table[i - 1, j], i - 1, j),
            (table[i, j - 1], i, j - 1),
        )
        _, i, j = min(moves, key=lambda entry: entry[0])
        path.append((i - 1, j - 1))
    path.reverse()

    warped = np.zeros(n)
    counts = np.zeros(n)
    for ri, qi in path:
        warped[ri] += q[qi]
        counts[ri] += 1.0
    return warped / counts, path


def dtw_distance(reference, query) -> float:
    """Cumulative squared-difference cost along the optimal warping path."""
    r = np.asarray(reference, dtype=float).reshape(-1)
    q = np.asarray(query, dtype=float).reshape(-1)
    _, path = dtw_align(r, q)
    return float(sum((r[i] - q[j]) ** 2 for i, j in path))


@dataclass(frozen=True, eq=False)
class AlignedVariance:
    """Cross-session mean and standard deviation after time-warp alignment."""

    joint: int  # 0-based
    mean: np.ndarray
    std: np.ndarray


def _joint_curves(sessions, joint: int) -> np.ndarray:
    if isinstance(sessions, np.ndarray):
        if sessions.ndim != 3:
            raise ValueError(
                f"expected a (sessions, updates, joints) array, got shape {sessions.shape}"
            )
        return np.asarray(sessions[:, :, joint], dtype=float)
    return np.stack([np.asarray(trace.lambdas)[:, joint] for trace in sessions])


def aligned_variance(sessions, joint: int) -> AlignedVariance:
    """Warp every session's exploration curve onto the cross-session mean.

    ``sessions`` is a sequence of SessionTrace objects or an array of shape
    (sessions, updates, joints); ``joint`` is 0-based.  Aligning before
    averaging keeps phase structure (rise, peak, decay) sharp even when
    sessions traverse it at different speeds.
    """
    curves = _joint_curves(sessions, joint)
    if curves.shape[0] < 2:
        raise ValueError("need at least two sessions")
    mean_curve = curves.mean(axis=0)
    warped = np.stack([dtw_align(mean_curve, curve)[0] for curve in curves])
    return AlignedVariance(joint=joint, mean=warped.mean(axis=0), std=warped.std(axis=0))
