# -*- coding: utf-8 -*-

# Copyright 2026 The wafflecert developers

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

"""
Command line entry point.

    wafflecert certify --input graph.json --output report.json -vv
    wafflecert oracle clique
"""

import argparse
import json
import logging
import sys

from . import __version__
from .config import load_config
from .errors import PreconditionError, ComputationError
from .inputspec import parse
from .pipeline import (
    EXIT_INTERNAL,
    EXIT_PRECONDITION,
    STAGES,
    oracle_automorphisms,
    oracle_clique,
    oracle_quadrature,
    oracle_visual_metric,
    report_to_json,
    run_pipeline,
)

ORACLES = ("quadrature", "visual", "clique", "automorphisms")


def build_parser():
    dscString = (
        "Certify that a graph of surfaces and churros assembles into a space "
        "with a flat discrete grouping, or find the obstruction."
    )
    parser = argparse.ArgumentParser(prog="wafflecert", description=dscString)
    parser.add_argument("--version", action="version", version="%(prog)s v" + __version__)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input", help="input document (JSON)")
    common.add_argument("-o", "--output", help="report file, stdout if omitted")
    common.add_argument("--figures", help="directory for SVG figures")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("-c", "--config", help="JSON file of tolerance overrides")
    common.add_argument("--timing", action="store_true", help="add stage timings to the report")
    common.add_argument(
        "-v", "--verbosity", action="count", default=0, help="increase log detail"
    )

    subparsers = parser.add_subparsers(dest="command", required=True)
    for stage in STAGES:
        subparsers.add_parser(stage, parents=[common], help="run the stages up to %s" % stage)
    oracle = subparsers.add_parser("oracle", parents=[common], help="run a reference check")
    oracle.add_argument("oracle", choices=ORACLES)
    oracle.add_argument(
        "--lines", type=int, default=3, help="lines per family of the clique oracle"
    )
    return parser


def configure_logging(verbosity):
    try:
        logLevel = {0: logging.ERROR, 1: logging.WARNING, 2: logging.INFO}[verbosity]
        fmt = "%(levelname)s: %(message)s"
    except KeyError:
        logLevel = logging.DEBUG
        fmt = "%(name)s: %(levelname)s: %(message)s"
    logging.basicConfig(format=fmt, level=logLevel)


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8") as outFile:
            outFile.write(text)
    else:
        sys.stdout.write(text)


def run_oracle(args, config):
    if args.oracle == "quadrature":
        return oracle_quadrature(seed=args.seed, config=config)
    if args.oracle == "visual":
        return oracle_visual_metric(seed=args.seed, config=config)
    if args.oracle == "clique":
        return oracle_clique(args.lines, config)
    if args.input is None:
        raise PreconditionError("the automorphisms oracle needs --input")
    return oracle_automorphisms(parse(args.input), config)


def main(argv=None):
    """
    Main function and script entry point

    Returns the exit code: 0 certificate (or completed stage), 2 obstruction,
    3 bad input or unmet precondition, 1 internal error.
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbosity)
    logger = logging.getLogger(__name__)

    try:
        if args.command == "oracle":
            result = run_oracle(args, load_config(args.config))
            _emit(json.dumps(result, indent=2, sort_keys=True) + "\n", args.output)
            return 0 if result["passed"] else EXIT_INTERNAL
        if args.input is None:
            raise PreconditionError("--input is required")
        spec = parse(args.input)
        config = load_config(args.config, spec.tolerances)
        report = run_pipeline(spec, args.command, config, args.figures, args.timing)
    except PreconditionError as ex:
        logger.error("%s", ex)
        return EXIT_PRECONDITION
    except ComputationError as ex:
        logger.error("%s", ex)
        return EXIT_INTERNAL
    except OSError as ex:
        logger.error("%s", ex)
        return EXIT_PRECONDITION

    _emit(report_to_json(report), args.output)
    return report.exitCode


if __name__ == "__main__":
    sys.exit(main())
