"""Command-line experiment runner.

    swiptevt list-experiments
    swiptevt validate --config scenario_or_manifest.json
    swiptevt run --config manifest.json [--out DIR] [--seed-override N] [--mc-samples N]

``--config`` also accepts the name of a bundled preset.  Exit codes: 0 on
success, 2 when the input fails validation, 3 on a numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .config import (
    EXPERIMENTS,
    ConfigError,
    config_hash,
    load_json,
    load_manifest,
    manifest_violations,
    scenario_violations,
)
from .csvio import write_records
from .exact import SeriesConvergenceError
from .experiments import describe, run_experiment
from .optimize import OptimizationAborted
from .quadrature import QuadratureError
from .scenario import ScenarioError

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

NUMERICAL_ERRORS = (QuadratureError, SeriesConvergenceError, OptimizationAborted,
                    ArithmeticError, FloatingPointError)


def preset_names():
    folder = resources.files("swiptevt") / "presets"
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def _resolve_path(name):
    path = Path(name)
    if path.exists():
        return path
    candidate = resources.files("swiptevt") / "presets" / f"{name}.json"
    if candidate.is_file():
        return Path(str(candidate))
    return path


def _error(kind, **info):
    record = {"status": kind, **info}
    print(json.dumps(record, sort_keys=True), file=sys.stderr)
    return record


def cmd_list(_args):
    presets = set(preset_names())
    for name in EXPERIMENTS:
        tag = " [preset]" if name in presets else ""
        print(f"{name}{tag}: {describe(name)}")
    return EXIT_OK


def cmd_validate(args):
    path = _resolve_path(args.config)
    try:
        obj = load_json(path)
    except (OSError, json.JSONDecodeError) as exc:
        _error("validation_failure", violations=["unreadable_config"], detail=str(exc))
        return EXIT_INVALID
    if isinstance(obj, dict) and "experiment" in obj:
        bad = manifest_violations(obj, path.parent)
    else:
        bad = scenario_violations(obj)
    for v in bad:
        print(v)
    if bad:
        return EXIT_INVALID
    print("ok")
    return EXIT_OK


def cmd_run(args):
    path = _resolve_path(args.config)
    try:
        manifest = load_manifest(path, args.seed_override, args.mc_samples)
    except ConfigError as exc:
        _error("validation_failure", violations=exc.violations)
        return EXIT_INVALID
    except (OSError, json.JSONDecodeError) as exc:
        _error("validation_failure", violations=["unreadable_config"], detail=str(exc))
        return EXIT_INVALID
    out = Path(args.out if args.out is not None else manifest.output_dir)
    try:
        result = run_experiment(manifest)
    except NUMERICAL_ERRORS as exc:
        _error("numerical_failure", experiment=manifest.experiment,
               error_type=type(exc).__name__, message=str(exc))
        return EXIT_NUMERICAL
    except (ScenarioError, ValueError) as exc:
        _error("validation_failure", experiment=manifest.experiment,
               error_type=type(exc).__name__, message=str(exc))
        return EXIT_INVALID
    meta = {
        "experiment": manifest.experiment,
        "config_hash": config_hash(manifest.resolved()),
        "seed": manifest.sampling_seed if manifest.sampling_seed is not None else "none",
        "geometry_seed": manifest.geometry_seed,
        "version": __version__,
    }
    out.mkdir(parents=True, exist_ok=True)
    write_records(out / "summary.csv", result.summary, meta)
    for name, records in sorted(result.curves.items()):
        write_records(out / f"{name}.csv", records, meta)
    print(f"{manifest.experiment}: wrote {1 + len(result.curves)} files to {out}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="swiptevt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list-experiments", help="list experiment tags")
    p = sub.add_parser("validate", help="check a scenario config or manifest without running")
    p.add_argument("--config", required=True)
    p = sub.add_parser("run", help="run the experiment described by a manifest")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None, help="output directory (overrides the manifest)")
    p.add_argument("--seed-override", type=int, default=None, help="replace the sampling seed")
    p.add_argument("--mc-samples", type=int, default=None, help="replace monte_carlo_n")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    handler = {"list-experiments": cmd_list, "validate": cmd_validate, "run": cmd_run}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
