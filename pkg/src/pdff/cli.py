"""Command-line front end.

Subcommands: ``optimize`` (reaching campaigns), ``analyze`` (static posture
analyses), ``demo`` (2-D illustration of adaptive exploration), and ``plot``
(re-render SVG charts from previously written CSVs).  Every run writes CSV
data, SVG charts drawn from those CSVs, and a per-command manifest recording
the resolved configuration and seeds.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import serialize
from .analysis import DEFAULT_PERTURBATION, interaction_ratios, sensitivity
from .config import OUTPUT_DIR_ENV, ConfigError, RunConfig
from .experiment import aligned_variance, freeing_order, run_campaign
from .optimizer import run_blackbox_session

__all__ = ["main"]


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdff",
        description="Planar reaching with adaptive-exploration policy search.",
    )
    sub = parser.add_subparsers(required=True, metavar="command")

    optimize = sub.add_parser(
        "optimize", help="run reaching campaigns and trace joint exploration"
    )
    _add_common_options(optimize)
    optimize.add_argument("--morphology", help="arm profile or 'all'")
    optimize.add_argument("--sessions", type=int, dest="sessions_per_target",
                          help="sessions per target")
    optimize.add_argument("--updates", type=int, help="updates per session")
    optimize.add_argument("--samples", type=int, dest="samples_per_update",
                          help="candidate policies per update")
    optimize.add_argument("--eliteness", type=float, help="cost-to-weight sharpness")
    optimize.add_argument("--lambda-init", type=float, dest="lambda_init",
                          help="initial exploration magnitude")
    optimize.add_argument("--lambda-min", type=float, dest="lambda_min",
                          help="exploration floor")
    optimize.add_argument("--dt", type=float, help="integration step")
    optimize.add_argument("--jobs", type=int, help="parallel session processes")
    optimize.set_defaults(handler=_cmd_optimize)

    analyze = sub.add_parser(
        "analyze", help="static posture analyses of the reach cost"
    )
    analyze.add_argument("analysis", choices=("sensitivity", "interaction"))
    _add_common_options(analyze)
    analyze.add_argument("--morphology", help="arm profile or 'all' (default all)")
    analyze.add_argument("--samples", type=int, default=100,
                         help="interaction samples per target (default 100)")
    analyze.add_argument("--perturbation", type=float, default=DEFAULT_PERTURBATION,
                         help="perturbation scale in radians (default pi/10)")
    analyze.add_argument("--cost-mode", choices=("distance", "terminal"),
                         default="distance", dest="cost_mode",
                         help="distance-only or terminal cost with comfort")
    analyze.set_defaults(handler=_cmd_analyze)

    demo = sub.add_parser(
        "demo", help="2-D illustration: exploration stretches, then collapses"
    )
    _add_common_options(demo)
    demo.add_argument("--start", type=float, nargs=2, default=(10.0, 10.0),
                      metavar=("X", "Y"), help="initial mean (default 10 10)")
    demo.add_argument("--updates", type=int, default=20)
    demo.add_argument("--samples", type=int, default=15)
    demo.add_argument("--eliteness", type=float, default=10.0)
    demo.add_argument("--lambda-init", type=float, dest="lambda_init", default=9.0)
    demo.add_argument("--lambda-min", type=float, dest="lambda_min", default=0.0)
    demo.set_defaults(handler=_cmd_demo)

    plot = sub.add_parser("plot", help="re-render SVG charts from saved CSVs")
    plot.add_argument("--input-dir", dest="input_dir",
                      help="directory holding the CSVs (default: output dir)")
    plot.add_argument("--output-dir", dest="output_dir",
                      help=f"defaults to --input-dir, then ${OUTPUT_DIR_ENV}")
    plot.set_defaults(handler=_cmd_plot)

    return parser


def _add_common_options(command: argparse.ArgumentParser):
    command.add_argument("--config", help="plain-text key = value config file")
    command.add_argument("--output-dir", dest="output_dir",
                         help=f"artifact directory (default ${OUTPUT_DIR_ENV} or pdff_out)")
    command.add_argument("--seed", type=int, help="base random seed")


_OVERRIDE_FIELDS = (
    "morphology", "sessions_per_target", "updates", "samples_per_update",
    "eliteness", "lambda_init", "lambda_min", "dt", "jobs", "seed", "output_dir",
)


def _resolve_config(args) -> RunConfig:
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    overrides = {}
    for name in _OVERRIDE_FIELDS:
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    return RunConfig.from_mapping(overrides, base=config).validated()


def _prepare_output_dir(config: RunConfig) -> str:
    out = config.resolve_output_dir()
    os.makedirs(out, exist_ok=True)
    probe = os.path.join(out, ".write_probe")
    with open(probe, "w", encoding="utf-8"):
        pass
    os.remove(probe)
    return out


def _cmd_optimize(args) -> int:
    from . import charts

    config = _resolve_config(args)
    out = _prepare_output_dir(config)
    targets = config.make_targets()
    serialize.targets_csv(targets, os.path.join(out, "targets.csv"))

    tags = config.morphology_tags()
    for tag in tags:
        arm = config.make_arm(tag)
        result = run_campaign(
            arm, targets,
            sessions_per_target=config.sessions_per_target,
            base_seed=config.seed,
            optimizer=config.make_optimizer(),
            basis=config.make_basis(),
            cost_weights=config.make_cost_weights(),
            dt=config.dt,
            jobs=config.jobs,
        )
        serialize.campaign_csv(result, os.path.join(out, f"campaign_{tag}.csv"))
        serialize.peaks_json(result, os.path.join(out, f"campaign_{tag}_peaks.json"),
                             order=freeing_order(result))
        charts.campaign_chart(result.mean_relative, result.mean_total, tag,
                              os.path.join(out, f"campaign_{tag}.svg"))
        serialize.sessions_summary_csv(result, os.path.join(out, f"sessions_{tag}.csv"))
        if len(result.sessions) >= 2:
            aligned = aligned_variance(result.sessions, 0)
            serialize.aligned_csv(aligned, os.path.join(out, f"aligned_{tag}_joint1.csv"))
            charts.aligned_chart(aligned.mean, aligned.std,
                                 f"joint 1 exploration, {tag} arm",
                                 os.path.join(out, f"aligned_{tag}_joint1.svg"))
        print(f"{tag}: campaign artifacts written to {out}")

    serialize.manifest_json(
        os.path.join(out, "manifest_optimize.json"), "optimize",
        config.as_dict(), {tag: config.seed for tag in tags},
    )
    return 0


def _cmd_analyze(args) -> int:
    from . import charts

    config = _resolve_config(args)
    if args.samples < 1:
        print("error: samples: must be at least 1", file=sys.stderr)
        return 2
    if args.perturbation <= 0.0:
        print("error: perturbation: must be positive", file=sys.stderr)
        return 2
    out = _prepare_output_dir(config)
    targets = config.make_targets()
    tags = config.morphology_tags()

    extras = {
        "analysis": args.analysis,
        "samples": args.samples,
        "perturbation": args.perturbation,
        "cost_mode": args.cost_mode,
    }
    if args.analysis == "sensitivity":
        reports = [
            sensitivity(config.make_arm(tag), targets,
                        perturbation=args.perturbation,
                        cost_mode=args.cost_mode,
                        cost_weights=config.make_cost_weights())
            for tag in tags
        ]
        serialize.sensitivity_csv(reports, os.path.join(out, "sensitivity.csv"))
        serialize.sensitivity_json(reports, os.path.join(out, "sensitivity.json"))
        charts.sensitivity_chart({r.morphology: r.values for r in reports},
                                 os.path.join(out, "sensitivity.svg"))
    else:
        reports = [
            interaction_ratios(config.make_arm(tag), targets,
                               samples_per_target=args.samples,
                               seed=config.seed,
                               perturbation_scale=args.perturbation,
                               cost_mode=args.cost_mode,
                               cost_weights=config.make_cost_weights())
            for tag in tags
        ]
        serialize.interaction_csv(reports, os.path.join(out, "interaction.csv"))
        serialize.interaction_json(reports, os.path.join(out, "interaction.json"))
        charts.interaction_chart(
            {r.morphology: (list(r.pairs), r.ratios) for r in reports},
            os.path.join(out, "interaction.svg"),
        )
    print(f"{args.analysis} artifacts written to {out}")

    manifest = dict(config.as_dict())
    manifest.update(extras)
    serialize.manifest_json(
        os.path.join(out, f"manifest_analyze_{args.analysis}.json"),
        f"analyze {args.analysis}", manifest, {"base": config.seed},
    )
    return 0


def _cmd_demo(args) -> int:
    from . import charts

    if args.updates < 1:
        print("error: updates: must be at least 1", file=sys.stderr)
        return 2
    if args.samples < 2:
        print("error: samples: must be at least 2", file=sys.stderr)
        return 2
    if args.lambda_init <= 0.0:
        print("error: lambda_init: must be positive", file=sys.stderr)
        return 2
    config = _resolve_config(args)
    seed = config.seed
    out = _prepare_output_dir(config)

    trace = run_blackbox_session(
        lambda theta: float(np.linalg.norm(theta)),
        np.asarray(args.start, dtype=float),
        lambda_init=args.lambda_init,
        lambda_min=args.lambda_min,
        n_samples=args.samples,
        eliteness=args.eliteness,
        n_updates=args.updates,
        seed=seed,
    )
    serialize.demo_csv(trace, os.path.join(out, "demo.csv"))
    charts.demo_chart(serialize.read_demo_csv(os.path.join(out, "demo.csv")),
                      os.path.join(out, "demo.svg"))
    serialize.manifest_json(
        os.path.join(out, "manifest_demo.json"), "demo",
        {
            "start": list(map(float, args.start)),
            "updates": args.updates,
            "samples": args.samples,
            "eliteness": args.eliteness,
            "lambda_init": args.lambda_init,
            "lambda_min": args.lambda_min,
            "cost": "euclidean norm",
        },
        {"base": seed},
    )
    print(f"demo artifacts written to {out}")
    return 0


def _cmd_plot(args) -> int:
    from . import charts

    source = args.input_dir or args.output_dir or os.environ.get(OUTPUT_DIR_ENV, "") \
        or "pdff_out"
    if not os.path.isdir(source):
        print(f"error: {source}: not a directory", file=sys.stderr)
        return 1
    out = args.output_dir or source
    os.makedirs(out, exist_ok=True)

    rendered = 0
    for name in sorted(os.listdir(source)):
        stem, ext = os.path.splitext(name)
        if ext != ".csv":
            continue
        csv_path = os.path.join(source, name)
        svg_path = os.path.join(out, f"{stem}.svg")
        if stem.startswith("campaign_"):
            _, mean_relative, mean_total = serialize.read_campaign_csv(csv_path)
            charts.campaign_chart(mean_relative, mean_total,
                                  stem.removeprefix("campaign_"), svg_path)
        elif stem.startswith("aligned_"):
            mean, std = serialize.read_aligned_csv(csv_path)
            charts.aligned_chart(mean, std, stem.removeprefix("aligned_"), svg_path)
        elif stem == "sensitivity":
            charts.sensitivity_chart(serialize.read_sensitivity_csv(csv_path), svg_path)
        elif stem == "interaction":
            charts.interaction_chart(serialize.read_interaction_csv(csv_path), svg_path)
        elif stem == "demo":
            charts.demo_chart(serialize.read_demo_csv(csv_path), svg_path)
        else:
            continue
        rendered += 1
        print(f"rendered {svg_path}")
    if rendered == 0:
        print(f"error: no chart data found in {source}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
