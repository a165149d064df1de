"""Command-line entry point: ``tsineq verify|fuzz|identity|reduce``.

Every verb writes newline-delimited JSON (or CSV for ``verify``) and exits
0 only when no record has a negative margin beyond its slack.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import harness
from .errors import ScenarioError

log = logging.getLogger("tsineq")


def _emit(report, fmt, out):
    if out:
        harness.emit_report(report, fmt, path=out)
    else:
        harness.emit_report(report, fmt, stream=sys.stdout)


def cmd_verify(args) -> int:
    scenario = harness.load_scenario(args.scenario)
    report = harness.run_suite([scenario])
    _emit(report, args.format, args.out)
    return 1 if report.failures else 0


def cmd_fuzz(args) -> int:
    scenarios = harness.generate_scenarios(args.seed, args.count, args.profile)
    report = harness.run_suite(scenarios, args.parallelism, seed=args.seed)
    _emit(report, "json", args.out)
    s = report.summary
    log.info("%d records: %d passed, %d failed, %d errors", s["records"], s["passed"], s["failed"], s["errors"])
    return 1 if report.failures else 0


def cmd_identity(args) -> int:
    scenario = harness.load_scenario(args.scenario)
    residuals = harness.evaluate_check(scenario, harness.IDENTITY_CHECK)
    for r in residuals:
        print(json.dumps({"scenario_id": scenario.id, **r.to_dict()}, sort_keys=True))
    return 0 if all(r.passed for r in residuals) else 1


def cmd_reduce(args) -> int:
    scenario = harness.load_scenario(args.scenario)
    result = harness.reduction_check(scenario, args.check)
    print(json.dumps(result, sort_keys=True))
    return 0 if result["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tsineq", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("verify", help="run the checks listed in a scenario file")
    p.add_argument("--scenario", required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fuzz", help="generate and verify seeded random scenarios")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--profile", choices=harness.PROFILES, required=True)
    p.add_argument("--parallelism", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("identity", help="Montgomery residual at every probe point")
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("reduce", help="compare a classical inequality with its general form")
    p.add_argument("--check", choices=("pach1.1", "pach1.2"), required=True)
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=cmd_reduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (ScenarioError, OSError) as exc:
        print(f"tsineq: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
