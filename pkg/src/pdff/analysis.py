"""Static posture analyses of the reach cost landscape.

Both analyses perturb the stretched rest posture (all joint angles zero) and
score postures by the distance from the end effector to a goal, without
running the optimizer at all.  ``sensitivity`` measures how strongly each
joint moves the cost on its own; ``interaction_ratios`` measures how reliably
the cost ranking of two proximal perturbations survives independent noise on
a more distal joint.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arm import ArmModel, TargetSet, end_effector_positions
from .cost import CostWeights

__all__ = [
    "DEFAULT_PERTURBATION",
    "InteractionReport",
    "SensitivityReport",
    "interaction_ratios",
    "sensitivity",
]

DEFAULT_PERTURBATION = np.pi / 10


def _target_points(targets) -> np.ndarray:
    if isinstance(targets, TargetSet):
        return targets.points
    pts = np.asarray(targets, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
        raise ValueError(f"targets must have shape (n, 2), got {pts.shape}")
    return pts


def _static_costs(arm, angles, points, cost_mode, weights):
    """Posture costs, vectorized: angles (..., n_joints) -> (..., n_targets)."""
    tips = end_effector_positions(arm, angles)
    miss = tips[..., None, :] - points
    squared = np.einsum("...gi,...gi->...g", miss, miss)
    if cost_mode == "distance":
        return np.sqrt(squared)
    if cost_mode == "terminal":
        comfort = weights.comfort * np.max(angles, axis=-1)
        return weights.distance * squared + comfort[..., None]
    raise ValueError(f"unknown cost mode {cost_mode!r}; use 'distance' or 'terminal'")


@dataclass(frozen=True, eq=False)
class SensitivityReport:
    """Mean absolute cost change per single-joint perturbation."""

    morphology: str
    perturbation: float
    values: np.ndarray  # (n_joints,)


def sensitivity(
    arm: ArmModel,
    targets,
    perturbation: float = DEFAULT_PERTURBATION,
    cost_mode: str = "distance",
    cost_weights: CostWeights | None = None,
) -> SensitivityReport:
    """Score each joint by how much bending it alone changes the reach cost.

    For joint m the rest posture gets ``perturbation`` added to that joint
    only; the report value is |cost(perturbed) - cost(rest)| averaged over
    the targets.  With the default distance mode this is deterministic.
    """
    points = _target_points(targets)
    weights = cost_weights if cost_weights is not None else CostWeights()
    rest = _static_costs(arm, np.zeros(arm.n_joints), points, cost_mode, weights)
    perturbed = _static_costs(
        arm, perturbation * np.eye(arm.n_joints), points, cost_mode, weights
    )
    values = np.abs(perturbed - rest[None, :]).mean(axis=1)
    return SensitivityReport(
        morphology=arm.name or "custom", perturbation=perturbation, values=values
    )


@dataclass(frozen=True, eq=False)
class InteractionReport:
    """Ranking-stability ratios for every (proximal, distal) joint pair."""

    morphology: str
    pairs: tuple[tuple[int, int], ...]  # 1-based (proximal, distal) labels
    ratios: np.ndarray
    median: float

    def ratio(self, proximal: int, distal: int) -> float:
        """Look up one pair's ratio by 1-based joint labels."""
        return float(self.ratios[self.pairs.index((proximal, distal))])


def interaction_ratios(
    arm: ArmModel,
    targets,
    samples_per_target: int = 100,
    seed: int = 0,
    perturbation_scale: float = DEFAULT_PERTURBATION,
    distal_scale: float | None = None,
    cost_mode: str = "distance",
    cost_weights: CostWeights | None = None,
) -> InteractionReport:
    """How often distal noise leaves the proximal cost ranking intact.

    For each ordered pair (proximal p, distal d) one trial draws two proximal
    perturbations P1, P2 and, for each of them, two distal perturbations, all
    from a centered normal with standard deviation ``perturbation_scale``
    (``distal_scale`` overrides the distal draw scale).  That yields four
    postures; the trial counts as stable (1) when the cost ranking of P1
    versus P2 is the same under both distal draws, else 0.  Ratios average the
    trials over ``samples_per_target`` draws for every target; a ratio near 1
    means the distal joint barely interferes with the proximal comparison.
    """
    points = _target_points(targets)
    if samples_per_target < 1:
        raise ValueError("need at least one sample per target")
    weights = cost_weights if cost_weights is not None else CostWeights()
    if distal_scale is None:
        distal_scale = perturbation_scale
    rng = np.random.default_rng(seed)
    n_joints = arm.n_joints

    pairs = []
    ratios = []
    for proximal in range(n_joints - 1):
        for distal in range(proximal + 1, n_joints):
            prox_draws = rng.normal(0.0, perturbation_scale, (samples_per_target, 2))
            dist_draws = rng.normal(0.0, distal_scale, (samples_per_target, 2, 2))
            angles = np.zeros((samples_per_target, 2, 2, n_joints))
            angles[..., proximal] = prox_draws[:, :, None]
            angles[..., distal] = dist_draws
            costs = _static_costs(arm, angles, points, cost_mode, weights)
            first = costs[:, 0, 0, :] < costs[:, 1, 0, :]
            second = costs[:, 0, 1, :] < costs[:, 1, 1, :]
            pairs.append((proximal + 1, distal + 1))
            ratios.append(float((first == second).mean()))

    ratios = np.asarray(ratios)
    return InteractionReport(
        morphology=arm.name or "custom",
        pairs=tuple(pairs),
        ratios=ratios,
        median=float(np.median(ratios)),
    )
