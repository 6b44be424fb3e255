"""
Adaptive exploration on a 2-D toy cost
======================================

Runs the weighted-averaging update on J(theta) = ||theta|| in two ways:

* starting far from the optimum at [10, 10], where the covariance should
  stretch along the slope while the mean walks toward the origin;
* starting exactly at the optimum [0, 0], where there is nothing left to
  learn and the covariance should simply shrink.
"""
from pathlib import Path

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.patches import Ellipse

from pdff.optimizer import run_blackbox_session

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

cost = lambda theta: float(np.linalg.norm(theta))


def draw(ax, trace, title):
    steps = len(trace.means)
    shades = plt.get_cmap("viridis")(np.linspace(0.15, 0.9, steps))
    for mean, cov, shade in zip(trace.means, trace.covariances, shades):
        values, vectors = np.linalg.eigh(cov)
        angle = np.degrees(np.arctan2(vectors[1, -1], vectors[0, -1]))
        ax.add_patch(Ellipse(mean, 2 * np.sqrt(values[-1]), 2 * np.sqrt(values[0]),
                             angle=angle, fill=False, color=shade))
    ax.plot(trace.means[:, 0], trace.means[:, 1], "o-", color="black",
            markersize=3, linewidth=1.0, label="mean")
    ax.plot(0, 0, "*", color="crimson", markersize=12, label="optimum")
    ax.set_title(title)
    ax.set_aspect("equal")
    ax.legend(fontsize="small", loc="upper left")


downhill = run_blackbox_session(cost, [10.0, 10.0], lambda_init=9.0,
                                n_updates=15, seed=0)
settled = run_blackbox_session(cost, [0.0, 0.0], lambda_init=9.0,
                               n_updates=15, seed=0)

fig, axes = plt.subplots(1, 2, figsize=(11, 5))
draw(axes[0], downhill, "start [10, 10]: stretch along the slope, then move")
draw(axes[1], settled, "start [0, 0]: nothing to learn, so shrink")
fig.tight_layout()
fig.savefig(OUT / "adaptive_exploration_2d.svg")
print(f"wrote {OUT / 'adaptive_exploration_2d.svg'}")

norms = np.linalg.norm(downhill.means, axis=1)
spread = [np.linalg.eigvalsh(c).sum() for c in settled.covariances]
print(f"mean norm from [10,10]: {norms[0]:.2f} -> {norms[-1]:.2f} "
      f"-> final {np.linalg.norm(downhill.final_mean):.2f}")
print(f"eigenvalue sum from [0,0]: {spread[0]:.2f} -> {spread[-1]:.3f} "
      f"-> final {np.linalg.eigvalsh(settled.final_covariance).sum():.3f}")
