"""Command-line front end.

Exit codes: 0 success, 2 scenario schema violation, 3 dimension mismatch,
4 solver non-convergence, 5 no region characterization applies.
"""

from __future__ import annotations

import argparse
import sys

from . import report
from .matcore import DimensionError
from .regimes import classify
from .scenario import ScenarioError, dump_scenario, load_scenario
from .solvers import ConvergenceError, genie_minmax, noisy_sum_capacity
from .solvers.region import RegionPreconditionError, region_aligned_strong, region_very_strong

EXIT_SCHEMA = 2
EXIT_DIMENSION = 3
EXIT_CONVERGENCE = 4
EXIT_NO_REGION = 5


def _common(p):
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("--tol", type=float, help="solver tolerance")
    p.add_argument("--seed", type=int, help="random seed for restarts")
    p.add_argument("--restarts", type=int, help="number of solver starting points")
    p.add_argument("--points", type=int, help="weights in the region sweep")
    p.add_argument("--thm4", "--minmax", dest="minmax", action="store_true",
                   help="use the genie-aided min-max bound and its certificate")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--dump-scenario", action="store_true",
                   help="print the normalized scenario document and exit")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mimozic",
        description="Regimes, capacity regions and sum rates of MIMO Gaussian Z-interference channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("classify", help="classify the interference regime"))
    _common(sub.add_parser("sumrate", help="sum rate with interference treated as noise"))
    _common(sub.add_parser("region", help="capacity region boundary"))
    return parser


def _config(sc, args):
    return sc.config(
        tol=args.tol, seed=args.seed, restarts=args.restarts, region_points=args.points,
        request_certificate=args.minmax or None,
    )


def cmd_classify(sc, args) -> str:
    rep = classify(sc.channel, sc.constraint, _config(sc, args))
    if args.format == "text":
        return report.regime_report_text(rep)
    return report.to_json(report.regime_report_to_dict(rep))


def cmd_sumrate(sc, args) -> str:
    cfg = _config(sc, args)
    if args.minmax:
        res, method = genie_minmax(sc.channel, sc.constraint, cfg), "genie_minmax"
    else:
        res, method = noisy_sum_capacity(sc.channel, sc.constraint, cfg), "treat_interference_as_noise"
    if args.format == "text":
        return report.sumrate_text(res, method)
    return report.to_json(report.sumrate_to_dict(res, method))


def cmd_region(sc, args) -> str:
    cfg = _config(sc, args)
    try:
        region = region_very_strong(sc.channel, sc.constraint, cfg)
    except RegionPreconditionError:
        region = region_aligned_strong(sc.channel, sc.constraint, cfg)
    if args.format == "csv":
        return report.region_to_csv(region)
    if args.format == "json":
        return report.to_json(report.region_to_dict(region))
    return report.region_text(region)


COMMANDS = {"classify": cmd_classify, "sumrate": cmd_sumrate, "region": cmd_region}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sc = load_scenario(args.scenario)
    except OSError as exc:
        print(f"error: cannot read scenario: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except ScenarioError as exc:
        print(f"error: invalid scenario: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except DimensionError as exc:
        print(f"error: dimension mismatch: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    if args.dump_scenario:
        sys.stdout.write(dump_scenario(sc))
        return 0
    try:
        out = COMMANDS[args.command](sc, args)
    except ConvergenceError as exc:
        print(f"error: solver did not converge: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except RegionPreconditionError:
        print(
            "error: neither very strong nor aligned strong interference holds; "
            "no capacity region characterization applies",
            file=sys.stderr,
        )
        return EXIT_NO_REGION
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
