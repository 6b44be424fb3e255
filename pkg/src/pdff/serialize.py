"""CSV and JSON serialization of traces, reports, and run manifests.

Floats are written with repr-level precision in a fixed format, so repeated
runs with the same seed produce byte-identical files.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .analysis import InteractionReport, SensitivityReport
from .arm import TargetSet
from .cost import CostBreakdown
from .experiment import AlignedVariance, CampaignResult
from .optimizer import BlackboxTrace, SessionTrace
from .policy import Trajectory

__all__ = [
    "aligned_csv",
    "campaign_csv",
    "cost_json",
    "demo_csv",
    "interaction_csv",
    "interaction_json",
    "manifest_json",
    "peaks_json",
    "read_aligned_csv",
    "read_campaign_csv",
    "read_demo_csv",
    "read_interaction_csv",
    "read_sensitivity_csv",
    "read_targets_csv",
    "sensitivity_csv",
    "session_csv",
    "session_json",
    "sessions_summary_csv",
    "targets_csv",
    "trajectory_csv",
]


def _fmt(value) -> str:
    return format(float(value), ".17g")


def _write_rows(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def _read_rows(path):
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        return header, list(reader)


def targets_csv(targets: TargetSet, path):
    header = ["index", "x", "y"]
    rows = [[i, _fmt(x), _fmt(y)] for i, (x, y) in enumerate(targets.points)]
    _write_rows(path, header, rows)


def read_targets_csv(path) -> np.ndarray:
    _, rows = _read_rows(path)
    return np.array([[float(row[1]), float(row[2])] for row in rows])


def trajectory_csv(trajectory: Trajectory, path):
    n_joints = trajectory.n_joints
    header = ["t"] + [f"q_{m}" for m in range(1, n_joints + 1)] + ["x", "y"]
    rows = []
    for i, t in enumerate(trajectory.times):
        rows.append(
            [_fmt(t)]
            + [_fmt(q) for q in trajectory.angles[i]]
            + [_fmt(trajectory.path[i, 0]), _fmt(trajectory.path[i, 1])]
        )
    _write_rows(path, header, rows)


def session_csv(trace: SessionTrace, path):
    """One row per update: exploration state and mean-policy cost terms."""
    n_joints = trace.lambdas.shape[1]
    header = (
        ["update"]
        + [f"lambda_{m}" for m in range(1, n_joints + 1)]
        + [f"relative_{m}" for m in range(1, n_joints + 1)]
        + ["total", "cost_distance", "cost_comfort", "cost_acceleration", "cost_total"]
    )
    rows = []
    for u in range(trace.n_updates):
        rows.append(
            [u + 1]
            + [_fmt(v) for v in trace.lambdas[u]]
            + [_fmt(v) for v in trace.relative[u]]
            + [_fmt(trace.total[u])]
            + [_fmt(v) for v in trace.mean_costs[u]]
        )
    _write_rows(path, header, rows)


def session_json(trace: SessionTrace, path):
    summary = {
        "seed": int(trace.seed),
        "target": [float(trace.target[0]), float(trace.target[1])],
        "n_updates": int(trace.n_updates),
        "final_distance": float(trace.final_distance),
        "final_total_exploration": float(trace.final_total),
        "final_mean_cost": {
            "distance_term": float(trace.final_mean_costs[0]),
            "comfort_term": float(trace.final_mean_costs[1]),
            "acceleration_term": float(trace.final_mean_costs[2]),
            "total": float(trace.final_mean_costs[3]),
        },
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(summary, handle, indent=2, sort_keys=True)
        handle.write("\n")


def campaign_csv(result: CampaignResult, path):
    """Campaign means, one row per update."""
    n_joints = result.n_joints
    header = (
        ["update"]
        + [f"mean_lambda_{m}" for m in range(1, n_joints + 1)]
        + [f"mean_relative_{m}" for m in range(1, n_joints + 1)]
        + ["mean_total"]
    )
    rows = []
    for u in range(result.n_updates):
        rows.append(
            [u + 1]
            + [_fmt(v) for v in result.mean_lambdas[u]]
            + [_fmt(v) for v in result.mean_relative[u]]
            + [_fmt(result.mean_total[u])]
        )
    _write_rows(path, header, rows)


def read_campaign_csv(path):
    """Return (mean_lambdas, mean_relative, mean_total) arrays."""
    header, rows = _read_rows(path)
    n_joints = sum(1 for name in header if name.startswith("mean_lambda_"))
    data = np.array([[float(v) for v in row[1:]] for row in rows])
    return (
        data[:, :n_joints],
        data[:, n_joints : 2 * n_joints],
        data[:, 2 * n_joints],
    )


def sessions_summary_csv(result: CampaignResult, path):
    header = [
        "session", "seed", "target_x", "target_y",
        "final_distance", "final_cost_total", "final_total_exploration",
    ]
    rows = []
    for i, trace in enumerate(result.sessions):
        rows.append([
            i, trace.seed, _fmt(trace.target[0]), _fmt(trace.target[1]),
            _fmt(trace.final_distance), _fmt(trace.final_mean_costs[3]),
            _fmt(trace.final_total),
        ])
    _write_rows(path, header, rows)


def peaks_json(result: CampaignResult, path, order=None):
    payload = {
        "morphology": result.morphology,
        "joints": [
            {
                "joint": m + 1,
                "peak_relative": float(result.peak_magnitude[m]),
                "peak_update": int(result.peak_update[m]),
                "never_freed": bool(result.never_freed[m]),
            }
            for m in range(result.n_joints)
        ],
    }
    if order is not None:
        payload["freeing_order"] = [int(j) for j in order]
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def aligned_csv(aligned: AlignedVariance, path):
    header = ["update", "mean", "std"]
    rows = [
        [u + 1, _fmt(aligned.mean[u]), _fmt(aligned.std[u])]
        for u in range(aligned.mean.shape[0])
    ]
    _write_rows(path, header, rows)


def read_aligned_csv(path):
    _, rows = _read_rows(path)
    data = np.array([[float(row[1]), float(row[2])] for row in rows])
    return data[:, 0], data[:, 1]


def sensitivity_csv(reports: list[SensitivityReport], path):
    """Matrix of mean absolute cost changes: one row per morphology."""
    n_joints = reports[0].values.shape[0]
    header = ["morphology"] + [f"joint_{m}" for m in range(1, n_joints + 1)]
    rows = [[r.morphology] + [_fmt(v) for v in r.values] for r in reports]
    _write_rows(path, header, rows)


def read_sensitivity_csv(path):
    _, rows = _read_rows(path)
    return {row[0]: np.array([float(v) for v in row[1:]]) for row in rows}


def sensitivity_json(reports: list[SensitivityReport], path):
    payload = {
        r.morphology: {
            "perturbation": float(r.perturbation),
            "values": [float(v) for v in r.values],
        }
        for r in reports
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def interaction_csv(reports: list[InteractionReport], path):
    header = ["morphology", "proximal", "distal", "ratio"]
    rows = []
    for report in reports:
        for (proximal, distal), ratio in zip(report.pairs, report.ratios):
            rows.append([report.morphology, proximal, distal, _fmt(ratio)])
    _write_rows(path, header, rows)


def read_interaction_csv(path):
    """Return {morphology: (pairs, ratios)} from an interaction CSV."""
    _, rows = _read_rows(path)
    out: dict[str, tuple[list[tuple[int, int]], list[float]]] = {}
    for morphology, proximal, distal, ratio in rows:
        pairs, ratios = out.setdefault(morphology, ([], []))
        pairs.append((int(proximal), int(distal)))
        ratios.append(float(ratio))
    return {
        tag: (pairs, np.asarray(ratios)) for tag, (pairs, ratios) in out.items()
    }


def interaction_json(reports: list[InteractionReport], path):
    payload = {
        report.morphology: {
            "median": float(report.median),
            "pairs": {
                f"{p}-{d}": float(ratio)
                for (p, d), ratio in zip(report.pairs, report.ratios)
            },
        }
        for report in reports
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _ellipse_parameters(covariance: np.ndarray):
    """Top/bottom eigenvalues and major-axis angle folded into [-pi/2, pi/2)."""
    values, vectors = np.linalg.eigh(covariance)
    major = vectors[:, -1]
    angle = float(np.arctan2(major[1], major[0]))
    if angle >= np.pi / 2:
        angle -= np.pi
    elif angle < -np.pi / 2:
        angle += np.pi
    return float(values[-1]), float(values[0]), angle


def demo_csv(trace: BlackboxTrace, path):
    """Per-update snapshots of the 2-D illustration (7 columns)."""
    if trace.means.shape[1] != 2:
        raise ValueError("demo snapshots are only defined for 2-D traces")
    header = ["update", "mean_x", "mean_y", "eig_1", "eig_2", "eigvec_angle", "cost"]
    rows = []
    for u in range(trace.n_updates):
        eig_1, eig_2, angle = _ellipse_parameters(trace.covariances[u])
        rows.append([
            u + 1,
            _fmt(trace.means[u, 0]), _fmt(trace.means[u, 1]),
            _fmt(eig_1), _fmt(eig_2), _fmt(angle), _fmt(trace.costs[u]),
        ])
    _write_rows(path, header, rows)


def read_demo_csv(path):
    _, rows = _read_rows(path)
    return np.array([[float(v) for v in row] for row in rows])


def cost_json(breakdown: CostBreakdown, path):
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(breakdown.as_dict(), handle, indent=2, sort_keys=True)
        handle.write("\n")


def manifest_json(path, command: str, config: dict, seeds: dict):
    """Record the full resolved configuration and every base seed."""
    payload = {"command": command, "config": config, "seeds": seeds}
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
