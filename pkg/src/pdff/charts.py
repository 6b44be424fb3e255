"""SVG chart rendering for campaign, analysis, and demo artifacts.

Every chart is drawn from data that also lives in a sibling CSV, and output
is deterministic (fixed hash salt, no date metadata), so artifacts can be
regenerated and diffed.
"""

from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Ellipse

plt.rcParams["svg.hashsalt"] = "pdff"

__all__ = [
    "aligned_chart",
    "campaign_chart",
    "demo_chart",
    "interaction_chart",
    "sensitivity_chart",
]

_SAVE_KWARGS = {"format": "svg", "metadata": {"Date": None}}


def _joint_labels(n_joints: int) -> list[str]:
    return [f"joint {m}" for m in range(1, n_joints + 1)]


def campaign_chart(mean_relative, mean_total, morphology: str, path):
    """Stacked relative exploration per joint plus the total exploration line.

    Vertical bars mark each joint's peak on its averaged relative curve.
    """
    mean_relative = np.asarray(mean_relative, dtype=float)
    mean_total = np.asarray(mean_total, dtype=float)
    n_updates, n_joints = mean_relative.shape
    updates = np.arange(1, n_updates + 1)

    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    colors = plt.get_cmap("viridis")(np.linspace(0.1, 0.9, n_joints))
    ax.stackplot(
        updates, mean_relative.T, labels=_joint_labels(n_joints), colors=colors, alpha=0.85
    )
    cumulative = np.cumsum(mean_relative, axis=1)
    for m in range(n_joints):
        peak = int(mean_relative[:, m].argmax())
        base = cumulative[peak, m - 1] if m > 0 else 0.0
        ax.plot(
            [updates[peak], updates[peak]],
            [base, base + mean_relative[peak, m]],
            color="black", linewidth=2.5, solid_capstyle="butt",
        )
    ax.set_xlim(1, max(n_updates, 2))
    ax.set_ylim(0.0, 1.0)
    ax.set_xlabel("update")
    ax.set_ylabel("relative exploration (stacked)")
    ax.set_title(f"exploration magnitudes, {morphology} arm")
    ax.legend(loc="upper right", fontsize="small", ncols=2)

    twin = ax.twinx()
    twin.plot(updates, mean_total, color="crimson", linewidth=2.0, label="total")
    twin.set_ylabel("total exploration", color="crimson")
    twin.tick_params(axis="y", labelcolor="crimson")
    twin.set_ylim(bottom=0.0)

    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)


def aligned_chart(mean, std, label: str, path):
    """Mean exploration curve with a +-1 standard deviation band."""
    mean = np.asarray(mean, dtype=float)
    std = np.asarray(std, dtype=float)
    updates = np.arange(1, mean.shape[0] + 1)

    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.fill_between(updates, mean - std, mean + std, alpha=0.3, color="steelblue",
                    label="+-1 std (time aligned)")
    ax.plot(updates, mean, color="steelblue", linewidth=2.0, label="mean")
    ax.set_xlim(1, max(mean.shape[0], 2))
    ax.set_xlabel("update")
    ax.set_ylabel("exploration magnitude")
    ax.set_title(label)
    ax.legend(loc="upper right", fontsize="small")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)


def sensitivity_chart(values_by_morphology: dict, path):
    """Grouped bars: per-joint cost sensitivity for each morphology."""
    tags = list(values_by_morphology)
    n_joints = len(next(iter(values_by_morphology.values())))
    positions = np.arange(1, n_joints + 1)
    width = 0.8 / max(1, len(tags))

    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    for k, tag in enumerate(tags):
        offset = (k - (len(tags) - 1) / 2) * width
        ax.bar(positions + offset, np.asarray(values_by_morphology[tag], dtype=float),
               width=width, label=tag)
    ax.set_xticks(positions, [str(m) for m in positions])
    ax.set_xlabel("joint")
    ax.set_ylabel("mean |cost change|")
    ax.set_title("single-joint sensitivity of the reach cost")
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)


def interaction_chart(data_by_morphology: dict, path):
    """Per-pair ranking-stability ratios with a median line per morphology."""
    tags = list(data_by_morphology)
    fig, axes = plt.subplots(
        1, len(tags), figsize=(4.0 * len(tags), 3.6), sharey=True, squeeze=False
    )
    for ax, tag in zip(axes[0], tags):
        pairs, ratios = data_by_morphology[tag]
        ratios = np.asarray(ratios, dtype=float)
        positions = np.arange(len(pairs))
        ax.bar(positions, ratios, color="slategray")
        median = float(np.median(ratios))
        ax.axhline(median, color="crimson", linewidth=1.5,
                   label=f"median {median:.2f}")
        ax.set_xticks(positions, [f"{p}-{d}" for p, d in pairs],
                      rotation=90, fontsize="x-small")
        ax.set_ylim(0.0, 1.05)
        ax.set_title(tag)
        ax.set_xlabel("joint pair")
        ax.legend(fontsize="x-small", loc="lower left")
    axes[0][0].set_ylabel("ranking stability")
    fig.suptitle("distal interference with proximal cost rankings")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)


def demo_chart(snapshots: np.ndarray, path):
    """Covariance ellipses along the mean path, plus the cost curve.

    ``snapshots`` are demo CSV rows: update, mean, top/bottom eigenvalues,
    major-axis angle, cost.
    """
    snapshots = np.asarray(snapshots, dtype=float)
    updates = snapshots[:, 0]
    means = snapshots[:, 1:3]
    eig_1 = snapshots[:, 3]
    eig_2 = snapshots[:, 4]
    angles = snapshots[:, 5]
    costs = snapshots[:, 6]

    fig, (left, right) = plt.subplots(1, 2, figsize=(9.5, 4.2))
    colors = plt.get_cmap("viridis")(np.linspace(0.05, 0.95, snapshots.shape[0]))
    for k in range(snapshots.shape[0]):
        left.add_patch(Ellipse(
            means[k], 2.0 * np.sqrt(eig_1[k]), 2.0 * np.sqrt(eig_2[k]),
            angle=np.degrees(angles[k]), facecolor="none",
            edgecolor=colors[k], linewidth=1.2,
        ))
    left.plot(means[:, 0], means[:, 1], "o-", color="black", markersize=2.5,
              linewidth=0.8, label="mean")
    left.plot([0.0], [0.0], "r*", markersize=10, label="optimum")
    left.set_aspect("equal", adjustable="datalim")
    left.autoscale_view()
    left.set_title("search distribution per update")
    left.set_xlabel("parameter 1")
    left.set_ylabel("parameter 2")
    left.legend(fontsize="small", loc="upper left")

    right.plot(updates, costs, "o-", color="steelblue", markersize=3)
    right.set_xlabel("update")
    right.set_ylabel("cost of the mean")
    right.set_title("convergence")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)
