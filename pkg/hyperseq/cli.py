#!/usr/bin/env python3
"""
hts - command-line front-end for hypergeometric-type sequences.

Subcommands:
- eval EXPR --at N | --range A..B
- rec EXPR [--max-order D]
- prod EXPR1 EXPR2
- equal EXPR1 EXPR2
- normalize EXPR
- verify-rec --rec RECSPEC --expr EXPR --range A..B

Exit codes: 0 success, 1 false verdict, 2 parse/lowering error, 3 domain error.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional, Tuple

from hyperseq.errors import DomainError, HyperSeqError, LoweringError, OrderBoundError, ParseError
from hyperseq.exactarith import format_rational
from hyperseq.hyperterm import hts_eval, hts_normalize
from hyperseq.parser import parse_hts, parse_recurrence
from hyperseq.product import hts_product
from hyperseq.recurrence import hts_equal, hts_to_recurrence, rec_verify
from hyperseq.render import FORMATS, render, render_value

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3


def parse_range(text: str) -> Tuple[int, int]:
    """Parse "A..B" into an inclusive pair of naturals."""
    try:
        a, b = text.split("..")
        start, stop = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range A..B, got {text!r}")
    if start < 0 or stop < start:
        raise argparse.ArgumentTypeError(f"range {text!r} must satisfy 0 <= A <= B")
    return start, stop


def _natural(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"index {value} is negative")
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"order bound {value} must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    # --var/--format/-v are accepted before and after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--var", default=argparse.SUPPRESS, help="index variable name (default n)")
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS, help="output format (default text)")
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS, help="log progress to stderr")

    parser = argparse.ArgumentParser(
        prog="hts",
        description="Exact computations with hypergeometric-type sequences",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate an expression")
    p.add_argument("expr")
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--at", type=_natural, help="single index")
    where.add_argument("--range", type=parse_range, help="inclusive index range A..B")

    p = sub.add_parser("rec", parents=[common], help="derive an annihilating recurrence")
    p.add_argument("expr")
    p.add_argument("--max-order", type=_positive, help="fail instead of returning a recurrence above this order")

    p = sub.add_parser("prod", parents=[common], help="Hadamard product of two expressions")
    p.add_argument("left")
    p.add_argument("right")

    p = sub.add_parser("equal", parents=[common], help="decide whether two expressions are equal")
    p.add_argument("left")
    p.add_argument("right")

    p = sub.add_parser("normalize", parents=[common], help="print the normal form")
    p.add_argument("expr")

    p = sub.add_parser("verify-rec", parents=[common], help="check a recurrence on an index range")
    p.add_argument("--rec", required=True, help="recurrence such as '(n+1)*a(n) - a(n+1) = 0'")
    p.add_argument("--expr", required=True)
    p.add_argument("--range", type=parse_range, required=True)

    return parser


def _verdict(value: bool, fmt: str) -> str:
    return json.dumps(value) if fmt == "json" else ("true" if value else "false")


def _value_text(value, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(format_rational(value))
    return render_value(value, fmt)


def run_command(args: argparse.Namespace) -> Tuple[int, List[str]]:
    """Execute a parsed command; returns the exit code and the output lines."""
    var, fmt = args.var, args.format

    if args.command == "eval":
        S = parse_hts(args.expr, var)
        if args.at is not None:
            return EXIT_OK, [_value_text(hts_eval(S, args.at), fmt)]
        start, stop = args.range
        values = [hts_eval(S, n) for n in range(start, stop + 1)]
        if fmt == "json":
            return EXIT_OK, [json.dumps([format_rational(v) for v in values])]
        return EXIT_OK, [render_value(v, fmt) for v in values]

    if args.command == "rec":
        L = hts_to_recurrence(parse_hts(args.expr, var), max_order=args.max_order)
        logger.info(f"recurrence of order {L.order}")
        return EXIT_OK, [render(L, fmt, var)]

    if args.command == "prod":
        S = hts_product(parse_hts(args.left, var), parse_hts(args.right, var))
        return EXIT_OK, [render(S, fmt, var)]

    if args.command == "equal":
        same = hts_equal(parse_hts(args.left, var), parse_hts(args.right, var))
        return (EXIT_OK if same else EXIT_FALSE), [_verdict(same, fmt)]

    if args.command == "normalize":
        return EXIT_OK, [render(hts_normalize(parse_hts(args.expr, var)), fmt, var)]

    if args.command == "verify-rec":
        L = parse_recurrence(args.rec, var)
        S = parse_hts(args.expr, var)
        start, stop = args.range
        ok = rec_verify(L, S, stop, n_min=start)
        return (EXIT_OK if ok else EXIT_FALSE), [_verdict(ok, fmt)]

    raise ValueError(f"unknown command {args.command!r}")


def cli_main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    for name, default in (("var", "n"), ("format", "text"), ("verbose", 0)):
        if not hasattr(args, name):
            setattr(args, name, default)

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    logging.getLogger("hyperseq").setLevel(level)

    try:
        code, lines = run_command(args)
    except (ParseError, LoweringError) as e:
        print(f"hts: error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as e:
        print(f"hts: domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except OrderBoundError as e:
        print(f"hts: error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except HyperSeqError as e:
        logger.error(f"computation failed: {e}")
        print(f"hts: error: {e}", file=sys.stderr)
        return EXIT_DOMAIN

    for line in lines:
        print(line)
    return code


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
