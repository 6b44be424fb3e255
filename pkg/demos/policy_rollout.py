"""
Basis activations and one policy rollout
========================================

Shows the five normalized Gaussian basis activations over the movement
duration, then rolls out a hand-picked acceleration policy on the human
arm and draws the trajectory as a stroboscopic sequence of postures.
"""
from pathlib import Path

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from pdff.arm import ArmModel, forward_kinematics
from pdff.policy import BasisFunctionSet, activation_matrix, rollout, time_grid

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

arm = ArmModel.from_morphology("human")
basis = BasisFunctionSet()
times = time_grid(basis, dt=0.01)
activations = activation_matrix(basis, times)

# Accelerate the shoulder hard and the distal joints progressively less,
# mostly through the early basis functions.
weights = np.array([
    [40.0, 10.0, -30.0, -10.0, 0.0],
    [20.0, 5.0, -15.0, -5.0, 0.0],
    [10.0, 0.0, -8.0, 0.0, 0.0],
    [5.0, 0.0, -4.0, 0.0, 0.0],
    [2.0, 0.0, -2.0, 0.0, 0.0],
    [1.0, 0.0, -1.0, 0.0, 0.0],
])
trajectory = rollout(arm, basis, weights, dt=0.01)

fig, (top, bottom) = plt.subplots(2, 1, figsize=(7, 8))
for b in range(basis.n_basis):
    top.plot(times, activations[:, b], label=f"basis {b + 1}")
top.set_xlabel("time [s]")
top.set_ylabel("normalized activation")
top.set_title("basis activations (they sum to 1 at every instant)")
top.legend(fontsize="small")

strobe = np.linspace(0, len(times) - 1, 9).astype(int)
shades = plt.get_cmap("viridis")(np.linspace(0.15, 0.9, len(strobe)))
for step, shade in zip(strobe, shades):
    _, joints = forward_kinematics(arm, trajectory.angles[step])
    bottom.plot(joints[:, 0], joints[:, 1], "o-", color=shade,
                markersize=3, linewidth=1.5)
bottom.plot(trajectory.path[:, 0], trajectory.path[:, 1], "--",
            color="crimson", linewidth=1.0, label="end-effector path")
bottom.set_title("stroboscopic rollout, dark to light over 0.5 s")
bottom.set_aspect("equal")
bottom.legend(fontsize="small")
fig.tight_layout()
fig.savefig(OUT / "policy_rollout.svg")
print(f"wrote {OUT / 'policy_rollout.svg'}")

print(f"activations sum to 1 everywhere: "
      f"{np.allclose(activations.sum(axis=1), 1.0, atol=1e-12)}")
print(f"final posture (rad): {np.round(trajectory.angles[-1], 3).tolist()}")
print(f"end effector moved from (1, 0) to "
      f"({trajectory.path[-1, 0]:.3f}, {trajectory.path[-1, 1]:.3f})")
