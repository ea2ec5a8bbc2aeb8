#!/usr/bin/env python
#
# Copyright (c) Simpson Developers. All rights reserved.
#

__doc__ = """
Sensitivity analysis of Simpson's paradox on 2x2x2 contingency tables.

table input orders:

  --table a,b,c,d      collapsed 2x2 table in reading order
                       a = #(X=0,Y=1)  b = #(X=1,Y=1)
                       c = #(X=0,Y=0)  d = #(X=1,Y=0)

  --table8 n1,...,n8   full table in (x,w,y) order with y fastest,
                       i.e. cell index 4x + 2w + y

exit codes: 0 success, 1 verify found counterexamples,
            2 usage or config error, 3 rejection budget exceeded
"""

import sys
import logging

from simpson import config
from simpson import report
from simpson import util
from simpson.config import ConfigError
from simpson.logger import log, setup_stream_handler
from simpson.sampling import RejectionBudgetExceeded, SamplerConfig, TableFilter
from simpson.version import __prog__, __version__


def common_parser():
    """Returns the parent parser holding flags shared by every command."""

    import argparse

    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument(
        "--seed",
        type=int,
        metavar="SEED",
        help="random seed (64-bit unsigned)",
        default=config.SEED,
    )
    parser.add_argument(
        "--n",
        type=int,
        metavar="COUNT",
        help="number of accepted tables",
        default=config.N,
    )
    parser.add_argument(
        "--format",
        choices=report.FORMATS,
        help="output format",
        default=config.FORMAT,
    )
    parser.add_argument(
        "--out",
        metavar="PATH",
        help="output file path (default: stdout)",
        default="-",
    )
    parser.add_argument(
        "--allow-small",
        action="store_true",
        help="permit simulations with %d or fewer tables" % (config.MIN_ACCEPTED - 1),
        default=False,
    )
    parser.add_argument(
        "--max-rejections",
        type=int,
        metavar="COUNT",
        help="rejected tables allowed before giving up",
        default=None,
    )
    parser.add_argument(
        "--threads",
        type=int,
        metavar="COUNT",
        help="worker processes (default: $SIMPSON_THREADS or cpu count)",
        default=None,
    )
    parser.add_argument(
        "--debug",
        action="store_true",
        help="debug logging",
        default=config.DEBUG,
    )
    return parser


def parse_args(argv=None):
    """Command line argument parser."""

    import argparse

    parser = argparse.ArgumentParser(
        prog=__prog__,
        description=__doc__,
        formatter_class=argparse.RawTextHelpFormatter,
    )
    parser.add_argument(
        "-v",
        "--version",
        action="version",
        version="%(prog)s {version}".format(version=__version__),
    )
    subparsers = parser.add_subparsers(dest="which", help="which command to run")
    common = [common_parser()]

    # unconditional simulation
    subparsers.add_parser(
        "simulate",
        parents=common,
        help="estimate reversal probabilities over uniformly random tables",
    )

    # conditional simulation
    conditional_parser = subparsers.add_parser(
        "simulate-conditional",
        parents=common,
        help="estimate reversal probabilities over tables collapsing to --table",
    )
    conditional_parser.add_argument(
        "--table",
        required=True,
        metavar="a,b,c,d",
        help="collapsed table: #(X=0,Y=1),#(X=1,Y=1),#(X=0,Y=0),#(X=1,Y=0)",
    )
    conditional_parser.add_argument(
        "--require-or-wy",
        action="store_true",
        help="keep only splits with OR_WY > 1",
        default=False,
    )

    # case study
    analyze_parser = subparsers.add_parser(
        "analyze",
        parents=common,
        help="odds ratio sensitivity analysis of an observed 2x2 table",
    )
    analyze_parser.add_argument(
        "--table",
        required=True,
        metavar="a,b,c,d",
        help="collapsed table: #(X=0,Y=1),#(X=1,Y=1),#(X=0,Y=0),#(X=1,Y=0)",
    )
    analyze_parser.add_argument(
        "--or-wy",
        required=True,
        type=float,
        metavar="BOUND",
        help="plausible upper bound on OR_WY (> 1), e.g. %s" % config.OR_WY_BOUND,
    )
    analyze_parser.add_argument(
        "--or-wx-plausible",
        type=float,
        metavar="BOUND",
        help="plausible upper bound on OR_WX to compare with the threshold",
        default=None,
    )
    analyze_parser.add_argument(
        "--simulate",
        action="store_true",
        help="also run the conditional simulation",
        default=False,
    )
    analyze_parser.add_argument(
        "--require-or-wy",
        action="store_true",
        help="keep only simulated splits with OR_WY > 1",
        default=False,
    )

    # single table
    evaluate_parser = subparsers.add_parser(
        "evaluate",
        parents=common,
        help="evaluate conditions and reversals on one full table",
    )
    evaluate_parser.add_argument(
        "--table8",
        required=True,
        metavar="n1,...,n8",
        help="full table in (x,w,y) order, y fastest",
    )

    # property suite
    subparsers.add_parser(
        "verify",
        parents=common,
        help="check the reversal implications on random tables",
    )

    args = parser.parse_args(argv)

    return args, parser


def sampler_config(args):
    filter = TableFilter.OR_XY_GT_1
    if getattr(args, "require_or_wy", False):
        filter = TableFilter.OR_XY_AND_OR_WY_GT_1
    return SamplerConfig(
        seed=args.seed,
        filter=filter,
        target_accepted=args.n,
        max_rejections=args.max_rejections,
    )


def evaluate_table(table):
    """
    Returns (table, measures, conditions, reversals, closed form fit,
    normal equation fit) for one full table, after relabeling X and W so
    both associate non-negatively with Y.
    """
    from simpson.conditions import canonicalize_w, canonicalize_x, evaluate_conditions
    from simpson.reversals import detect_reversals, ls_coefficients, ls_oracle
    from simpson.tables import measures

    canonical = canonicalize_x(table)
    if canonical is not table:
        log.info("relabeled X so that RD_XY >= 0: %s", canonical.to_text())
    relabeled = canonicalize_w(canonical)
    if relabeled is not canonical:
        log.info("relabeled W so that RD_WY >= 0: %s", relabeled.to_text())
    canonical = relabeled
    ms = measures(canonical)
    return (
        canonical,
        ms,
        evaluate_conditions(ms),
        detect_reversals(canonical),
        ls_coefficients(canonical),
        ls_oracle(canonical),
    )


def run_command(args):
    """Runs a parsed command and returns (output text, exit code)."""
    from simpson import simulation
    from simpson.tables import CollapsedTable, ContingencyTable

    if args.which == "simulate":
        result = simulation.run_unconditional(
            sampler_config(args), workers=args.threads, allow_small=args.allow_small
        )
        return report.render(result, args.format), 0

    elif args.which == "simulate-conditional":
        collapsed = CollapsedTable.from_text(args.table)
        result = simulation.run_conditional(
            collapsed,
            sampler_config(args),
            workers=args.threads,
            allow_small=args.allow_small,
        )
        return report.render(result, args.format), 0

    elif args.which == "analyze":
        collapsed = CollapsedTable.from_text(args.table)
        cfg = None
        if args.simulate:
            cfg = sampler_config(args)
        case = simulation.analyze_case(
            collapsed,
            args.or_wy,
            cfg=cfg,
            or_wx_plausible=args.or_wx_plausible,
            workers=args.threads,
            allow_small=args.allow_small,
        )
        return report.render_case(case, args.format), 0

    elif args.which == "evaluate":
        evaluation = evaluate_table(ContingencyTable.from_text(args.table8))
        return report.render_evaluation(evaluation, args.format), 0

    elif args.which == "verify":
        from simpson.verify import run_verify

        result = run_verify(n=args.n, seed=args.seed, workers=args.threads)
        return report.render_verify(result, args.format), (0 if result.passed else 1)

    raise ConfigError("invalid command: %s" % args.which)


def main(argv=None):
    """Main thread."""
    args, parser = parse_args(argv)

    if not args.which:
        parser.print_help()
        return 2

    setup_stream_handler(level=logging.DEBUG if args.debug else logging.INFO)

    try:
        text, code = run_command(args)
    except RejectionBudgetExceeded as err:
        log.error("%s (accepted %d, rejected %d)", err, err.accepted, err.rejected)
        return 3
    except (ValueError, ConfigError) as err:
        log.error("%s", err)
        return 2

    util.write_output(args.out, text)
    return code


if __name__ == "__main__":
    sys.exit(main())
