#!/usr/bin/env python

# Copyright 2016 Daniel Nunes
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import argparse
import logging
import sys
from . import __version__
from .bench import COMMANDS, RunConfig, parse_probes, run
from .exceptions import EXIT_OK, EXIT_USAGE, HaarQLError, excepthook, format_error
from .settings import read_settings


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "{}: error: {}\n".format(self.prog, message))


def build_parser():
    parser = _ArgumentParser(prog="haarql", description="Haar wavelet quasilinearization solver for doubly "
                                                        "singular boundary value problems.")
    parser.add_argument("command", choices=COMMANDS)
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--case", help="catalogue case id, 1 to 8")
    source.add_argument("--problem", metavar="PATH", help="problem file")
    source.add_argument("--all", action="store_true", help="every catalogue case (bench)")
    parser.add_argument("--J", type=int, help="resolution level, 2M = 2^(J+1) unknowns")
    parser.add_argument("--J-min", type=int, default=2, help="first level of the converge study")
    parser.add_argument("--J-max", type=int, default=6, help="last level of the converge study")
    parser.add_argument("--iters", type=int, help="maximum number of sweeps")
    parser.add_argument("--tol", type=float, help="outer tolerance on successive iterates")
    parser.add_argument("--format", choices=("csv", "markdown", "json"), help="report format")
    parser.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    parser.add_argument("--probe", metavar="X1,X2,...", help="probe abscissae in [0, 1]")
    parser.add_argument("--quad", type=int, help="oracle panels per subinterval")
    parser.add_argument("--settings", metavar="PATH", help="settings file, defaults to ~/.haarql/settings.json")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("-q", "--quiet", action="store_true")
    parser.add_argument("--version", action="version", version="%(prog)s {}".format(__version__))
    return parser


def _log_level(args):
    if args.quiet:
        return logging.ERROR
    return {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)


def _run_config(args, settings):
    solver = settings["Solver"]
    output = settings["Output"]
    J = args.J
    max_iters = args.iters
    # bench defaults to the published level and sweep count of each case
    if args.command in ("solve", "converge"):
        J = solver["J"] if J is None else J
        max_iters = solver["max_iters"] if max_iters is None else max_iters
    elif args.command == "oracle":
        max_iters = solver["max_iters"] if max_iters is None else max_iters

    return RunConfig(
        args.command,
        case_id=args.case,
        problem=args.problem,
        J=J,
        max_iters=max_iters,
        tol_outer=solver["tol_outer"] if args.tol is None else args.tol,
        format_=args.format or output["format"],
        out=args.out,
        probes=parse_probes(args.probe or output["probe"]),
        all_cases=args.all,
        n_quad=settings["Oracle"]["n_quad"] if args.quad is None else args.quad,
        pivot_floor_factor=settings["Linalg"]["pivot_floor_factor"],
        tol_solve=settings["Linalg"]["tol_solve"],
        workers=settings["Bench"]["workers"],
        digits=output["digits"],
        J_min=args.J_min,
        J_max=args.J_max,
        probe_count=settings["Oracle"]["probe_count"],
    )


def main(argv=None):
    """
    The command line entry point.

    :param argv: The arguments, defaults to sys.argv[1:].
    :return: The exit status: 0 success, 1 usage error, 2 solver error, 3 oracle unavailable.
    """
    sys.excepthook = excepthook

    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code is None else e.code

    logging.getLogger("haarql").setLevel(_log_level(args))
    try:
        config = _run_config(args, read_settings(args.settings))
        text = run(config)
    except HaarQLError as e:
        sys.stderr.write(format_error(e))
        return e.exit_status

    if config.out is None:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
