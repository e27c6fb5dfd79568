"""Command-line entry points.

Commands: basis, kernel, gfunc, polarize, multiplier, meda, sobolev,
report.  Common flags: --config PATH, --out DIR, --seed N, --threads N,
--format csv|json.  Exit codes: 0 success, 1 validation error, 2 numeric
non-convergence, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import sys

from .config import ExperimentConfig, load_config, parse_config
from .errors import NonConvergenceError, ValidationError
from .report import export, load_report
from .runner import run

_COMMAND_EXPERIMENT = {
    "basis": "basis-identities",
    "kernel": "kernel-identities",
    "gfunc": "equivalence",
    "polarize": "polarization",
    "multiplier": "identity-4.1",
    "meda": "meda-condition",
    "sobolev": "sobolev-equivalence",
}


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="flat key = value config file")
    sub.add_argument("--out", help="output directory for report files")
    sub.add_argument("--seed", type=int, help="random seed (mandatory for randomized runs)")
    sub.add_argument("--threads", type=int, help="worker threads for corpus fan-out")
    sub.add_argument("--format", choices=("csv", "json"), help="export format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hermlab",
        description="Numerical experiments for Hermite-operator harmonic analysis",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    for cmd, experiment in _COMMAND_EXPERIMENT.items():
        sub = subs.add_parser(cmd, help=f"run the {experiment} experiment")
        _add_common(sub)
        sub.set_defaults(experiment=experiment)
    rep = subs.add_parser("report", help="re-export an existing JSON report")
    rep.add_argument("input", help="path of a report.json")
    rep.add_argument("--out", required=True, help="output directory")
    rep.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    overrides = {
        "seed": args.seed,
        "threads": args.threads,
        "format": args.format,
        "out": args.out,
    }
    if args.config:
        cfg = load_config(args.config, overrides)
        if cfg.experiment != args.experiment:
            # a config may pin a sibling experiment (e.g. fspace under `sobolev`)
            pass
        return cfg
    overrides["experiment"] = args.experiment
    return parse_config("", overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "report":
            report = load_report(args.input)
            for path in export(report, args.format, args.out):
                print(path)
            return 0
        cfg = _config_from_args(args)
        report = run(cfg)
        print(f"experiment: {report.experiment}")
        print(f"content hash: {report.content_hash()}")
        for key, value in report.summary.items():
            print(f"  {key}: {value}")
        if cfg.out:
            print(f"wrote report to {cfg.out}")
        return 0
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 1
    except NonConvergenceError as exc:
        print(f"numeric non-convergence: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
