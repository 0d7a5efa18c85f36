"""Command-line front end (``signcoh``, or ``python -m signcoh``).

Exit status: 0 when every check passes, 1 on a mathematical mismatch (the
report is still written), 2 on usage, parse or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import harness
from .errors import DomainError
from .serialize import MatrixFormatError, load_matrix, matrix_to_json

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    text = text.strip().strip("[]()")
    if not text:
        return []
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated integer list, got {text!r}") from None


def _fraction(text: str) -> str:
    try:
        f = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected P/Q, got {text!r}") from None
    return f"{f.numerator}/{f.denominator}"


def _int_range(text: str) -> tuple[int, int]:
    vals = _int_list(text.replace(":", ","))
    if len(vals) != 2 or vals[0] > vals[1]:
        raise argparse.ArgumentTypeError(f"expected LO,HI with LO <= HI, got {text!r}")
    return vals[0], vals[1]


def _config(text: str) -> tuple[int, int]:
    vals = _int_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected P,Q, got {text!r}")
    return vals[0], vals[1]


def _output_flags(p):
    p.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def _run_flags(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix", metavar="FILE", help="matrix JSON file")
    src.add_argument("--builtin", metavar="NAME", help="example22, markov or rank2:P,Q")
    p.add_argument("--row", action="append", type=_int_list, metavar="LIST",
                   help="frozen row replacing the builtin coefficients; repeatable")
    seq = p.add_mutually_exclusive_group()
    seq.add_argument("--seq", type=_int_list, metavar="LIST", help="explicit 1-based directions")
    seq.add_argument("--random", type=int, metavar="LEN", help="random sequence of this length")
    seq.add_argument("--named", choices=("alternating", "cyclic123", "cyclic", "example22"))
    p.add_argument("--seed", type=int, default=0, help="PRNG seed for --random")
    p.add_argument("--allow-repeat", action="store_true", help="allow immediate repeats with --random")
    p.add_argument("--horizon", type=int, default=100, help="length of named sequences")
    p.add_argument("--delta", type=_fraction, metavar="P/Q", help="balance frequency floor")
    p.add_argument("--window", type=int, help="balance window length")
    p.add_argument("--max-depth", type=int, help="distance search budget")
    p.add_argument("--no-probe", action="store_true", help="conjecture: do not add unit probe rows")
    _output_flags(p)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="signcoh", description="Sign patterns of generalized c-vectors.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (("mutate", "matrix and sign trace along a sequence"),
                       ("conjecture", "stabilization, monotonicity and balance evidence"),
                       ("dist", "exchange-graph distance reached by a sequence")):
        _run_flags(sub.add_parser(name, help=text))

    r2 = sub.add_parser("rank2-verify", help="rank-2 closed forms against simulation")
    r2.add_argument("--config", action="append", type=_config, metavar="P,Q",
                    help="repeatable; default is every p,q <= 5 with pq >= 4")
    r2.add_argument("--range", type=int, default=8, help="initial rows cover [-R,R]^2")
    r2.add_argument("--window", type=_int_range, default=(-40, 40), metavar="LO,HI")
    r2.add_argument("--jobs", type=int, default=1)
    _output_flags(r2)

    mv = sub.add_parser("markov-verify", help="exhaustive Markov-quiver checks")
    mv.add_argument("--range", type=int, default=15, help="box half-width")
    mv.add_argument("--horizon", type=int, default=200)
    mv.add_argument("--jobs", type=int, default=1)
    _output_flags(mv)

    rp = sub.add_parser("replay", help="re-run the spec embedded in a report")
    rp.add_argument("report", metavar="FILE")
    _output_flags(rp)
    return parser


def _spec_from_args(args) -> harness.ExperimentSpec:
    if args.random is not None:
        seq = {"random": {"length": args.random, "seed": args.seed, "forbid_repeat": not args.allow_repeat}}
    elif args.named is not None:
        seq = {"named": args.named}
    elif args.seq is not None:
        seq = {"explicit": args.seq}
    elif args.builtin and args.builtin.strip().lower() == "example22":
        seq = {"named": "example22"}
    else:
        raise UsageError("a sequence is required: --seq, --random or --named")
    matrix = None
    if args.matrix is not None:
        matrix = matrix_to_json(load_matrix(args.matrix))
    return harness.ExperimentSpec(
        builtin=args.builtin,
        matrix=matrix,
        rows=args.row,
        sequence=seq,
        horizon=args.horizon,
        delta=args.delta,
        window=args.window,
        max_depth=args.max_depth,
        probe=not args.no_probe,
    )


def _render(report: dict, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(harness.csv_sign_rows(report))
        return buf.getvalue()
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _dispatch(args) -> dict:
    cmd = args.command
    if cmd in ("mutate", "conjecture", "dist"):
        spec = _spec_from_args(args)
        return {"mutate": harness.cmd_mutate, "conjecture": harness.cmd_conjecture,
                "dist": harness.cmd_dist}[cmd](spec)
    if cmd == "rank2-verify":
        configs = args.config or [(p, q) for p in range(1, 6) for q in range(1, 6) if p * q >= 4]
        return harness.cmd_rank2_verify(configs, args.range, args.window, args.jobs)
    if cmd == "markov-verify":
        return harness.cmd_markov_verify(args.range, args.horizon, jobs=args.jobs)
    with open(args.report, encoding="utf-8") as fh:
        return harness.replay(json.load(fh))


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        report = _dispatch(args)
        text = _render(report, args.format)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except MatrixFormatError as exc:
        print(f"signcoh: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, DomainError, OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"signcoh: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if report["ok"] else EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
