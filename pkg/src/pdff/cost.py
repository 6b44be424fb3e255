"""Reaching cost: squared target miss, end-posture comfort, acceleration effort."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arm import ArmModel, forward_kinematics
from .policy import Trajectory

__all__ = [
    "CostBreakdown",
    "CostWeights",
    "evaluate_cost",
    "static_distance_cost",
]


@dataclass(frozen=True)
class CostWeights:
    """Scale factors of the three cost terms."""

    distance: float = 100.0
    comfort: float = 1.0
    acceleration: float = 1.0e-5


@dataclass(frozen=True)
class CostBreakdown:
    distance_term: float
    comfort_term: float
    acceleration_term: float
    total: float

    @classmethod
    def from_terms(cls, distance: float, comfort: float, acceleration: float):
        return cls(distance, comfort, acceleration, distance + comfort + acceleration)

    def as_dict(self) -> dict[str, float]:
        return {
            "distance_term": self.distance_term,
            "comfort_term": self.comfort_term,
            "acceleration_term": self.acceleration_term,
            "total": self.total,
        }


def joint_effort_weights(n_joints: int) -> np.ndarray:
    """Effort weights n_joints..1: proximal acceleration costs more."""
    return np.arange(n_joints, 0, -1, dtype=float)


def evaluate_cost(trajectory: Trajectory, target, weights: CostWeights | None = None) -> CostBreakdown:
    """Score a rollout against a goal point.

    The distance term is the weighted squared final miss, the comfort term the
    (signed) largest final joint angle, and the acceleration term the
    effort-weighted mean of squared accelerations summed over the grid.
    """
    w = weights if weights is not None else CostWeights()
    goal = np.asarray(target, dtype=float)
    if goal.shape != (2,):
        raise ValueError(f"target must be a 2-D point, got shape {goal.shape}")
    miss = trajectory.path[-1] - goal
    distance = w.distance * float(miss @ miss)
    comfort = w.comfort * float(np.max(trajectory.angles[-1]))
    effort = joint_effort_weights(trajectory.n_joints)
    acceleration = (
        w.acceleration * float((trajectory.accelerations**2 @ effort).sum()) / effort.sum()
    )
    return CostBreakdown.from_terms(distance, comfort, acceleration)


def static_distance_cost(arm: ArmModel, joint_angles, target) -> float:
    """Euclidean distance from the posture's end effector to the goal."""
    goal = np.asarray(target, dtype=float)
    if goal.shape != (2,):
        raise ValueError(f"target must be a 2-D point, got shape {goal.shape}")
    tip, _ = forward_kinematics(arm, joint_angles)
    return float(np.linalg.norm(tip - goal))
