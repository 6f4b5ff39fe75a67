"""``korn-lab`` command line entry point."""

from __future__ import annotations

import argparse
import os
import sys

from .exceptions import ConfigError, KornLabError
from .expcli import EXPERIMENTS, emit_plotdata, load_config, run

EXIT_OK, EXIT_ASSERTION, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


def _threads(value):
    if value is not None:
        return value
    env = os.environ.get("KORNLAB_THREADS")
    if env is None:
        return 1
    try:
        n = int(env)
    except ValueError:
        raise ConfigError(f"must be a positive integer, got {env!r}", "KORNLAB_THREADS") from None
    if n < 1:
        raise ConfigError(f"must be a positive integer, got {env!r}", "KORNLAB_THREADS")
    return n


def _positive_int(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _positive_float(text):
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def build_parser():
    parser = argparse.ArgumentParser(prog="korn-lab", description="Numerical checks of Korn inequalities on thin shells.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run the experiment described by a config file")
    p_run.add_argument("--config", required=True, help="JSON experiment config")
    p_run.add_argument("--out", help="output directory (overrides the config's 'output')")
    p_run.add_argument("--threads", type=_positive_int, help="worker threads (default: $KORNLAB_THREADS or 1)")
    p_run.add_argument("--resolution-scale", type=_positive_float, default=1.0,
                       help="multiply every grid resolution by this factor")
    p_run.add_argument("--dump-gradients", action="store_true",
                       help="also write per-point gradient matrices (ansatz_sweep)")
    sub.add_parser("list-experiments", help="list the available experiments")
    p_val = sub.add_parser("validate", help="check a config file without running it")
    p_val.add_argument("--config", required=True)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "list-experiments":
        for name, text in EXPERIMENTS.items():
            print(f"{name:15s} {text}")
        return EXIT_OK
    try:
        config = load_config(args.config)
        if args.command == "validate":
            print(f"{args.config}: ok ({config.experiment})")
            return EXIT_OK
        report = run(config, args.out, _threads(args.threads), args.resolution_scale, args.dump_gradients)
        out = args.out or config.output
        if report.plot:
            emit_plotdata(report, out)
    except ConfigError as exc:
        print(f"korn-lab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KornLabError, ArithmeticError, ValueError, OSError) as exc:
        print(f"korn-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for a in report.assertions:
        status = "PASS" if a.passed else "FAIL"
        print(f"{status} {a.name}: {a.lhs:.6g} {a.relation} {a.rhs:.6g}" + (f" ({a.detail})" if a.detail else ""))
    print(f"{config.experiment}: {'all assertions pass' if report.passed else 'assertion failure'}"
          f" in {report.wall_time:.1f} s")
    return EXIT_OK if report.passed else EXIT_ASSERTION


if __name__ == "__main__":
    sys.exit(main())
