"""Planar kinematic arm: morphologies, forward kinematics, and reach targets.

The arm is a chain of links with total length 1, rooted at the origin.  Joint
angles accumulate along the chain: link m points along the sum of joint
angles 1..m, so the all-zero posture is a fully stretched horizontal arm with
its tip at (1, 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "HUMAN_LINK_LENGTHS",
    "MORPHOLOGIES",
    "ArmModel",
    "Morphology",
    "TargetSet",
    "default_targets",
    "end_effector_positions",
    "forward_kinematics",
    "load_morphologies",
]

# Tolerance on "link lengths sum to 1".
LENGTH_SUM_TOL = 1e-12

# Shoulder-to-fingertip profile of the human-like arm: long proximal links,
# short distal ones.  What matters downstream is the decreasing shape.
HUMAN_LINK_LENGTHS = (0.30, 0.27, 0.16, 0.12, 0.08, 0.07)


@dataclass(frozen=True)
class Morphology:
    """A named set of relative link lengths, shoulder first."""

    tag: str
    link_lengths: tuple[float, ...]


MORPHOLOGIES: dict[str, Morphology] = {
    "human": Morphology("human", HUMAN_LINK_LENGTHS),
    "equidistant": Morphology("equidistant", (1.0 / 6.0,) * 6),
    "inverted": Morphology("inverted", tuple(reversed(HUMAN_LINK_LENGTHS))),
}


def load_morphologies(path) -> dict[str, Morphology]:
    """Read ``name = l1, l2, ...`` lines into a morphology dictionary.

    Blank lines and lines starting with ``#`` are ignored.  Lengths are not
    normalized here; ArmModel rejects profiles that do not sum to 1.
    """
    entries: dict[str, Morphology] = {}
    with open(path, encoding="utf-8") as handle:
        for raw in handle:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            name, sep, rhs = line.partition("=")
            if not sep:
                raise ValueError(f"{path}: expected 'name = lengths', got {line!r}")
            try:
                lengths = tuple(float(tok) for tok in rhs.replace(",", " ").split())
            except ValueError as err:
                raise ValueError(f"{path}: bad length in {line!r}") from err
            if not lengths:
                raise ValueError(f"{path}: no lengths given for {name.strip()!r}")
            entries[name.strip()] = Morphology(name.strip(), lengths)
    return entries


@dataclass(frozen=True, eq=False)
class ArmModel:
    """Kinematic chain description: positive link lengths summing to 1."""

    link_lengths: np.ndarray
    name: str = ""

    def __post_init__(self):
        links = np.array(self.link_lengths, dtype=float).reshape(-1)
        if links.size < 1:
            raise ValueError("arm needs at least one link")
        if np.any(links <= 0.0):
            raise ValueError("link lengths must be positive")
        total = float(links.sum())
        if abs(total - 1.0) > LENGTH_SUM_TOL:
            raise ValueError(f"link lengths must sum to 1, got {total!r}")
        links.setflags(write=False)
        object.__setattr__(self, "link_lengths", links)

    @property
    def n_joints(self) -> int:
        return self.link_lengths.size

    @classmethod
    def from_morphology(cls, morphology: Morphology | str) -> "ArmModel":
        if isinstance(morphology, str):
            try:
                morphology = MORPHOLOGIES[morphology]
            except KeyError:
                raise ValueError(
                    f"unknown morphology {morphology!r}; expected one of "
                    f"{sorted(MORPHOLOGIES)}"
                ) from None
        return cls(np.array(morphology.link_lengths), name=morphology.tag)


def forward_kinematics(arm: ArmModel, joint_angles) -> tuple[np.ndarray, np.ndarray]:
    """Map joint angles to Cartesian positions.

    Returns ``(end_effector, joint_positions)`` where ``joint_positions`` has
    shape (n_joints + 1, 2): row 0 is the origin and row m the tip of link m.
    """
    q = np.asarray(joint_angles, dtype=float)
    if q.shape != (arm.n_joints,):
        raise ValueError(
            f"expected {arm.n_joints} joint angles, got shape {q.shape}"
        )
    headings = np.cumsum(q)
    segments = arm.link_lengths[:, None] * np.column_stack(
        [np.cos(headings), np.sin(headings)]
    )
    joints = np.vstack([np.zeros((1, 2)), np.cumsum(segments, axis=0)])
    return joints[-1].copy(), joints


def end_effector_positions(arm: ArmModel, joint_angles) -> np.ndarray:
    """Vectorized endpoint-only forward kinematics.

    ``joint_angles`` may have any leading batch shape as long as the last
    axis holds the n_joints angles; the result replaces that axis by (x, y).
    """
    q = np.asarray(joint_angles, dtype=float)
    if q.shape[-1:] != (arm.n_joints,):
        raise ValueError(
            f"expected trailing axis of {arm.n_joints} joint angles, got shape {q.shape}"
        )
    headings = np.cumsum(q, axis=-1)
    x = np.cos(headings) @ arm.link_lengths
    y = np.sin(headings) @ arm.link_lengths
    return np.stack([x, y], axis=-1)


@dataclass(frozen=True, eq=False)
class TargetSet:
    """Reachable goal points for the arm tip.

    Every point must lie within the unit workspace and outside the configured
    minimum radius, so sessions never chase an unreachable goal.
    """

    points: np.ndarray
    min_radius: float = 0.0

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
            raise ValueError(f"targets must have shape (n, 2), got {pts.shape}")
        radii = np.linalg.norm(pts, axis=1)
        if np.any(radii > 1.0 + 1e-12):
            raise ValueError("target outside the unit workspace")
        if np.any(radii < self.min_radius):
            raise ValueError(f"target closer to the origin than {self.min_radius}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]


def default_targets(
    radii=(0.65, 0.85),
    per_arc: int = 10,
    angle_deg_range=(30.0, 150.0),
    anchor=(0.0, 0.85),
    min_radius: float = 0.5,
) -> TargetSet:
    """Lay out targets on concentric arcs in the upper half workspace.

    Each arc carries ``per_arc`` equally spaced points over the polar angle
    range.  If ``anchor`` is given, the arc point nearest to it is replaced by
    the exact anchor coordinates so the layout always contains that goal.
    """
    arcs = []
    lo, hi = angle_deg_range
    for radius in radii:
        angles = np.deg2rad(np.linspace(lo, hi, per_arc))
        arcs.append(np.column_stack([radius * np.cos(angles), radius * np.sin(angles)]))
    points = np.vstack(arcs)
    if anchor is not None:
        goal = np.asarray(anchor, dtype=float)
        nearest = int(np.argmin(np.linalg.norm(points - goal, axis=1)))
        points[nearest] = goal
    return TargetSet(points, min_radius=min_radius)
