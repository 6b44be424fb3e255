"""
Arm morphologies and the target set
===================================

Draws the three built-in morphologies at a bent posture and scatters the
default 20-target set over the workspace.  Output lands in demos/output/.
"""
from pathlib import Path

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from pdff.arm import ArmModel, default_targets, forward_kinematics

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

posture = np.array([np.pi / 3, -np.pi / 6, -np.pi / 6, -np.pi / 8, -np.pi / 8, -np.pi / 8])
targets = default_targets()

fig, axes = plt.subplots(1, 3, figsize=(12, 4), sharex=True, sharey=True)
for ax, tag in zip(axes, ("human", "equidistant", "inverted")):
    arm = ArmModel.from_morphology(tag)
    tip, joints = forward_kinematics(arm, posture)
    ax.plot(joints[:, 0], joints[:, 1], "o-", color="black", linewidth=2.5,
            markersize=4, label="links")
    ax.plot(*tip, "s", color="crimson", markersize=7, label="end effector")
    ax.scatter(targets.points[:, 0], targets.points[:, 1], s=12,
               color="steelblue", alpha=0.6, label="targets")
    circle = plt.Circle((0, 0), 1.0, fill=False, linestyle=":", color="gray")
    ax.add_patch(circle)
    ax.set_title(f"{tag}: links {np.round(arm.link_lengths, 3).tolist()}")
    ax.set_aspect("equal")
    ax.set_xlim(-0.6, 1.1)
    ax.set_ylim(-0.2, 1.1)
axes[0].legend(loc="lower left", fontsize="small")
fig.suptitle("same posture, three link-length profiles")
fig.tight_layout()
fig.savefig(OUT / "arm_gallery.svg")
print(f"wrote {OUT / 'arm_gallery.svg'}")

for tag in ("human", "equidistant", "inverted"):
    arm = ArmModel.from_morphology(tag)
    tip, _ = forward_kinematics(arm, posture)
    print(f"{tag:12s} tip at ({tip[0]:+.3f}, {tip[1]:+.3f})")
print(f"{targets.points.shape[0]} targets, radii "
      f"{np.linalg.norm(targets.points, axis=1).min():.2f}"
      f"..{np.linalg.norm(targets.points, axis=1).max():.2f}")
