"""Batch driver: validate configs, run experiments, emit report.json.

Exit codes: 0 all checks passed, 1 at least one check failed, 2 config or
usage error.  Reports are deterministic for a fixed config and seed: all
floats are rounded to 17 significant digits before serialization and the
JSON is emitted with sorted keys.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .config import EXPERIMENTS, RunConfig
from .errors import ConfigError, DeltalapError
from .experiments import run_experiment

__all__ = ["main"]


def _round17(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.17g}")
    if isinstance(obj, dict):
        return {k: _round17(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round17(v) for v in obj]
    return obj


def _write_report(path, payload) -> None:
    text = json.dumps(_round17(payload), sort_keys=True, indent=2)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
        fh.write("\n")


def _cmd_validate(args) -> int:
    try:
        cfg = RunConfig.from_file(args.config)
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 2
    print(f"config ok: experiment={cfg.experiment}, n={cfg.n}, L={cfg.L}")
    return 0


def _cmd_run(args) -> int:
    try:
        cfg = RunConfig.from_file(args.config)
        overrides = {}
        if args.output_dir is not None:
            overrides["output_dir"] = args.output_dir
        if args.seed is not None:
            overrides["seed"] = args.seed
        if overrides:
            cfg = RunConfig.from_dict({**cfg.to_dict(), **overrides})
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 2

    out_dir = cfg.output_dir
    os.makedirs(out_dir, exist_ok=True)
    try:
        metrics, checks = run_experiment(cfg, out_dir=out_dir)
    except DeltalapError as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        report = {
            "version": __version__,
            "config": cfg.to_dict(),
            "error": str(exc),
            "passed": False,
        }
        _write_report(os.path.join(out_dir, "report.json"), report)
        return 1

    passed = all(c["passed"] for c in checks)
    report = {
        "version": __version__,
        "config": cfg.to_dict(),
        "metrics": metrics,
        "checks": checks,
        "failures": [c["name"] for c in checks if not c["passed"]],
        "passed": passed,
    }
    path = os.path.join(out_dir, "report.json")
    _write_report(path, report)
    for c in checks:
        mark = "PASS" if c["passed"] else "FAIL"
        print(f"[{mark}] {c['name']}: {c['value']:.6g} ({c['comparison']} {c['threshold']:.6g})")
    print(f"report: {path}")
    return 0 if passed else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="deltalap",
        description="Numerical operator calculus for the planar point-interaction Laplacian.",
    )
    sub = parser.add_subparsers(dest="command")

    run_p = sub.add_parser("run", help="execute an experiment from a JSON config")
    run_p.add_argument("--config", required=True)
    run_p.add_argument("--output-dir", default=None)
    run_p.add_argument("--seed", type=int, default=None)

    val_p = sub.add_parser("validate", help="check a config without running it")
    val_p.add_argument("--config", required=True)

    sub.add_parser("version", help="print the package version")

    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "validate":
        return _cmd_validate(args)
    if args.command == "version":
        print(__version__)
        return 0
    parser.print_help()
    return 2


if __name__ == "__main__":
    sys.exit(main())
