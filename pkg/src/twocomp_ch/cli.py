"""Command line entry point: ``twocomp-ch {run,verify,scenarios,emit}``.

Exit status: 0 completed / all criteria pass, 1 configuration or I/O error
(or a failed verification), 2 blow-up suspected, 3 numerical overflow.
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from .errors import TwoCompError
from .scenarios import (
    EXIT_CONFIG,
    SCENARIOS,
    RunConfig,
    apply_overrides,
    load_config,
    run_experiment,
    scenario_config,
)


def _config_flags(parser):
    group = parser.add_argument_group("config keys (override file values)")
    for f in dataclasses.fields(RunConfig):
        flag = "--" + f.name.replace("_", "-")
        group.add_argument(flag, dest="cfg_" + f.name, metavar="VALUE", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twocomp-ch", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment and write its outputs")
    src = p_run.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="JSON config file (a manifest is accepted too)")
    src.add_argument("--scenario", choices=sorted(SCENARIOS), help="start from a canned scenario")
    p_run.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
    p_run.add_argument("--out", help="output directory (default: $TWOCOMP_CH_OUT/<name>)")
    _config_flags(p_run)

    p_ver = sub.add_parser("verify", help="run an acceptance suite and print pass/fail per criterion")
    from .verify import SUITES

    p_ver.add_argument("suite", choices=sorted(SUITES))

    p_sc = sub.add_parser("scenarios", help="list canned scenarios")
    p_sc.add_argument("action", choices=["list"])

    p_emit = sub.add_parser("emit", help="rerun the experiment recorded in a manifest")
    p_emit.add_argument("--manifest", required=True)
    p_emit.add_argument("--out", help="output directory (default: the manifest's own)")
    return parser


def _flag_overrides(args):
    return [
        f"{key[4:]}={val}" for key, val in sorted(vars(args).items()) if key.startswith("cfg_") and val is not None
    ]


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "scenarios":
            for name, (description, _) in SCENARIOS.items():
                print(f"{name:<10s} {description}")
            return 0
        if args.command == "verify":
            from .verify import verify_suite

            return verify_suite(args.suite)
        if args.command == "run":
            config = load_config(args.config) if args.config else scenario_config(args.scenario)
            config = apply_overrides(config, list(args.override) + _flag_overrides(args))
            return run_experiment(config, args.out)
        if args.command == "emit":
            return run_experiment(load_config(args.manifest), args.out)
    except (TwoCompError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
