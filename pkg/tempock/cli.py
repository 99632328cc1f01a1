#!/usr/bin/python3
"""Command line: tempock COMMAND [options] FILE...

Exit status: 0 when everything holds, 1 on a violation, 2 on run-time
errors and limits, 64 on usage errors, 65 on invalid input.
"""

import argparse
import logging
import sys
from fractions import Fraction

from tempock import __version__, settings
from tempock.errors import EXIT_USAGE, TempockError
from tempock.pipeline import FORMATS, TEXT, RunConfig, run

logger = logging.getLogger(__name__)

HELP = {
    "check": "check the properties declared in the models",
    "explore": "build the state class graph and print its statistics",
    "sched": "schedulability of a task table, exact and interval execution times",
    "oracle": "compare the class graph with the discrete-time oracle",
    "fmt": "pretty-print the models",
    "obligations": "check the proof obligations of library component instances",
}


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with 64 instead of argparse's 2"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "{}: error: {}\n".format(self.prog, message))


def _positive_int(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive, got {}".format(text))
    return value


def _positive_float(text):
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive, got {}".format(text))
    return value


def _granularity(text):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("expected P/Q, got {}".format(text))
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive, got {}".format(text))
    return value


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--max-classes", type=_positive_int, help="class limit")
    common.add_argument("--time-budget", type=_positive_float, metavar="SECONDS",
                        help="wall time limit of each exploration")
    common.add_argument("--threads", type=_positive_int, help="exploration threads")
    common.add_argument("--format", choices=FORMATS, default=TEXT, dest="output")
    common.add_argument("--no-times", action="store_false", dest="times",
                        help="leave wall times and memory out of the report")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = ArgumentParser(prog="tempock", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version="tempock " + __version__)
    commands = parser.add_subparsers(dest="command", required=True,
                                     parser_class=ArgumentParser)

    check = commands.add_parser("check", parents=[common], help=HELP["check"])
    check.add_argument("--prop", metavar="NAME", help="check this property only")
    check.add_argument("--replay", action="store_true",
                       help="replay counterexamples on the discrete-time oracle")
    check.add_argument("--archive", action="store_true", help="store the report")
    check.add_argument("inputs", nargs="+", metavar="FILE")

    explore = commands.add_parser("explore", parents=[common], help=HELP["explore"])
    explore.add_argument("--tasks", type=_positive_int, metavar="N",
                         help="also explore a synthetic N-task system")
    explore.add_argument("--seed", type=int)
    explore.add_argument("inputs", nargs="*", metavar="FILE")

    sched = commands.add_parser("sched", parents=[common], help=HELP["sched"])
    sched.add_argument("--archive", action="store_true", help="store the report")
    sched.add_argument("inputs", nargs=1, metavar="TABLE")

    oracle = commands.add_parser("oracle", parents=[common], help=HELP["oracle"])
    oracle.add_argument("--granularity", type=_granularity, default=Fraction(1),
                        metavar="P/Q")
    oracle.add_argument("--depth", type=int, default=8,
                        help="length of the compared firing sequences")
    oracle.add_argument("--seed", type=int, help="random model seed when no file is given")
    oracle.add_argument("inputs", nargs="*", metavar="FILE")

    fmt = commands.add_parser("fmt", parents=[common], help=HELP["fmt"])
    fmt.add_argument("inputs", nargs="+", metavar="FILE")

    obligations = commands.add_parser("obligations", parents=[common],
                                      help=HELP["obligations"])
    obligations.add_argument("--archive", action="store_true", help="store the report")
    obligations.add_argument("inputs", nargs="+", metavar="FILE")
    return parser


def _configure_logging(verbose):
    level = settings.LOG_LEVEL
    if verbose == 1:
        level = "INFO"
    elif verbose > 1:
        level = "DEBUG"
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def config_from(args) -> RunConfig:
    options = vars(args)
    fields = RunConfig.__dataclass_fields__
    values = {k: v for k, v in options.items() if k in fields and v is not None}
    values["inputs"] = tuple(options.get("inputs") or ())
    return RunConfig(**values)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        report = run(config_from(args))
    except TempockError as e:
        logger.debug("%s", e.name, exc_info=True)
        print("{}: {}".format(e.name, e.description), file=sys.stderr)
        return e.code
    sys.stdout.write(report.render(args.output))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
