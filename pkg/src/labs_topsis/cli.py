"""``labs-bench``: run the LABS variant comparison from the command line."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .bench import ExperimentConfig, run_experiment
from .operators import MODES, VARIANTS, ConfigurationError


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="labs-bench",
        description="Compare the base GA with socio-cognitive mutation variants on LABS.",
    )
    p.add_argument("config", nargs="?", help="JSON config file; flags override its values")
    p.add_argument("--variant", action="append", choices=list(VARIANTS),
                   help="variant id, repeatable (default: all nine)")
    p.add_argument("--mode", action="append", choices=list(MODES),
                   help="mode id, repeatable (default: both)")
    p.add_argument("--runs", type=int, help="runs per (variant, mode) cell")
    p.add_argument("--length", type=int, help="sequence length L")
    p.add_argument("--budget", type=int, help="energy evaluations per run")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--out", help="output directory for traces and report")
    p.add_argument("--k", type=int, help="size of the best/worst groups")
    p.add_argument("--jobs", type=int, help="worker processes")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _config_from_args(args) -> ExperimentConfig:
    overrides = {
        "variants": args.variant,
        "modes": args.mode,
        "runs": args.runs,
        "length": args.length,
        "evaluation_budget": args.budget,
        "seed": args.seed,
        "out": args.out,
        "group_size": args.k,
        "jobs": args.jobs,
    }
    if args.config:
        return ExperimentConfig.from_file(args.config, **overrides)
    return ExperimentConfig.from_dict({k: v for k, v in overrides.items() if v is not None})


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = _config_from_args(args)
    except (ConfigurationError, ValueError, TypeError) as exc:
        print(f"labs-bench: configuration error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"labs-bench: cannot read config: {exc}", file=sys.stderr)
        return 1
    try:
        report = run_experiment(config)
    except OSError as exc:
        print(f"labs-bench: {exc}", file=sys.stderr)
        return 1

    print(f"{'variant':<9} {'mode':<7} {'mean':>9} {'sd':>8} {'min':>6} {'p vs base':>10}")
    for (v, m), s in report.summary.items():
        sig = report.significance.get((v, m))
        p = f"{sig.p_value:.4g}{'*' if sig.significant else ''}" if sig else "-"
        print(f"{v:<9} {m:<7} {s.mean:>9.2f} {s.sd:>8.2f} {s.min:>6.0f} {p:>10}")
    if config.out:
        print(f"wrote {len(report.traces)} traces and report.json to {config.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
