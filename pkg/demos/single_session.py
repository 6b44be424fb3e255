"""
One reaching session, joint by joint
====================================

Optimizes a reach to the straight-up anchor target (0, 0.85) with the
human arm and plots how each joint's exploration magnitude rises and
falls.  The shoulder-side joints light up first; the wrist-side joints
stay near the floor until later, if they wake up at all.
"""
from pathlib import Path

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from pdff.arm import ArmModel
from pdff.cost import CostWeights
from pdff.optimizer import OptimizerConfig, run_session
from pdff.policy import BasisFunctionSet

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

arm = ArmModel.from_morphology("human")
trace = run_session(
    arm,
    BasisFunctionSet(),
    target=np.array([0.0, 0.85]),
    optimizer=OptimizerConfig(),
    cost_weights=CostWeights(),
    seed=1,
)

updates = np.arange(1, trace.lambdas.shape[0] + 1)
fig, (top, bottom) = plt.subplots(2, 1, figsize=(8, 7), sharex=True)
shades = plt.get_cmap("viridis")(np.linspace(0.1, 0.9, arm.n_joints))
for m in range(arm.n_joints):
    top.plot(updates, trace.lambdas[:, m], color=shades[m], label=f"joint {m + 1}")
top.set_ylabel("exploration magnitude")
top.set_title("per-joint exploration over one session (seed 1)")
top.legend(fontsize="small", ncols=2)

bottom.plot(updates, trace.mean_costs[:, 3], color="black", label="total")
bottom.plot(updates, trace.mean_costs[:, 0], color="crimson", label="distance")
bottom.set_yscale("log")
bottom.set_xlabel("update")
bottom.set_ylabel("mean-policy cost")
bottom.legend(fontsize="small")
fig.tight_layout()
fig.savefig(OUT / "single_session.svg")
print(f"wrote {OUT / 'single_session.svg'}")

peaks = trace.relative.argmax(axis=0) + 1
print(f"relative-exploration peak updates by joint: {peaks.tolist()}")
print(f"final distance to target: {trace.final_distance:.4f}")
print(f"total exploration: start {trace.total[0]:.2f}, "
      f"peak {trace.total.max():.2f} at update {trace.total.argmax() + 1}, "
      f"end {trace.total[-1]:.2f}")
