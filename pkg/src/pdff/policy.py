"""Gaussian-basis acceleration policies and kinematic rollouts.

A policy is an (n_joints, n_basis) weight matrix.  At time t the normalized
basis activations are mixed with a joint's weight row to give its angular
acceleration; velocities and angles follow by explicit Euler integration from
rest, and the end-effector path by forward kinematics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arm import ArmModel, end_effector_positions

__all__ = [
    "BasisFunctionSet",
    "Trajectory",
    "activation_matrix",
    "basis_activations",
    "rollout",
    "time_grid",
]

# Relative slack when checking that dt divides the duration.
_GRID_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class BasisFunctionSet:
    """Gaussian kernels spaced evenly over the movement duration.

    Activations are normalized to sum to 1 at every time, so the policy
    output is a convex mixture of its basis weights.
    """

    n_basis: int = 5
    width: float = 0.05
    duration: float = 0.5
    centers: np.ndarray = None

    def __post_init__(self):
        if self.n_basis < 1:
            raise ValueError("need at least one basis function")
        if self.width <= 0.0:
            raise ValueError("kernel width must be positive")
        if self.duration <= 0.0:
            raise ValueError("movement duration must be positive")
        centers = np.linspace(0.0, self.duration, self.n_basis)
        centers.setflags(write=False)
        object.__setattr__(self, "centers", centers)


def basis_activations(basis: BasisFunctionSet, t: float) -> np.ndarray:
    """Normalized kernel activations at a single time inside [0, duration]."""
    t = float(t)
    if t < 0.0 or t > basis.duration:
        raise ValueError(f"time {t!r} outside the movement [0, {basis.duration}]")
    kernels = np.exp(-((t - basis.centers) ** 2) / basis.width**2)
    return kernels / kernels.sum()


def activation_matrix(basis: BasisFunctionSet, times) -> np.ndarray:
    """Row-normalized activations for every time in ``times``."""
    t = np.asarray(times, dtype=float)
    if t.size == 0:
        raise ValueError("empty time grid")
    if t.min() < 0.0 or t.max() > basis.duration:
        raise ValueError(f"times outside the movement [0, {basis.duration}]")
    kernels = np.exp(-((t[..., None] - basis.centers) ** 2) / basis.width**2)
    return kernels / kernels.sum(axis=-1, keepdims=True)


def time_grid(basis: BasisFunctionSet, dt: float) -> np.ndarray:
    """Integration grid 0, dt, ..., duration; dt must divide the duration."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    steps = basis.duration / dt
    n_steps = int(round(steps))
    if n_steps < 1 or abs(steps - n_steps) > _GRID_TOL * max(1.0, steps):
        raise ValueError(f"dt={dt!r} does not divide the duration {basis.duration!r}")
    return np.linspace(0.0, basis.duration, n_steps + 1)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """One rollout on the integration grid (arrays share the same length)."""

    times: np.ndarray          # (n,)
    accelerations: np.ndarray  # (n, n_joints)
    velocities: np.ndarray     # (n, n_joints)
    angles: np.ndarray         # (n, n_joints)
    path: np.ndarray           # (n, 2) end-effector positions

    def __post_init__(self):
        arrays = {}
        for field in ("times", "accelerations", "velocities", "angles", "path"):
            value = np.asarray(getattr(self, field), dtype=float)
            arrays[field] = value
        n = arrays["times"].shape[0]
        for field, value in arrays.items():
            if value.shape[0] != n:
                raise ValueError(f"{field} has {value.shape[0]} rows, expected {n}")
            object.__setattr__(self, field, value)

    @property
    def n_joints(self) -> int:
        return self.angles.shape[1]


def rollout(arm: ArmModel, basis: BasisFunctionSet, weights, dt: float) -> Trajectory:
    """Integrate an acceleration policy into a full trajectory.

    Args:
        arm: kinematic chain the policy drives.
        basis: kernel set defining activations and the movement duration.
        weights: (n_joints, n_basis) basis weights, one row per joint.
        dt: integration step; must divide the movement duration.

    Returns:
        Trajectory starting from rest (zero angles and velocities) with
        Euler-integrated states and the end-effector path at every step.
    """
    w = np.asarray(weights, dtype=float)
    if w.shape != (arm.n_joints, basis.n_basis):
        raise ValueError(
            f"weights shape {w.shape} does not match "
            f"({arm.n_joints}, {basis.n_basis})"
        )
    times = time_grid(basis, dt)
    activations = activation_matrix(basis, times)
    acc = activations @ w.T
    vel = np.zeros_like(acc)
    vel[1:] = dt * np.cumsum(acc[:-1], axis=0)
    ang = np.zeros_like(acc)
    ang[1:] = dt * np.cumsum(vel[:-1], axis=0)
    path = end_effector_positions(arm, ang)
    return Trajectory(times, acc, vel, ang, path)
