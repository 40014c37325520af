"""Command line entry point ``gw``.

Exit codes: 0 success, 1 parse or usage error, 2 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from .classify import CSV_COLUMNS, SweepTooLarge, classify, conjecture_check, sweep
from .gpoly import imaginary_part, merge_variables
from .gword import WordSyntaxError, parse_word, standard_form
from .numeric import EigenvalueError, NotPositiveDefinite, haar_unitary
from .trace import Parameterization, paper_unitary, symbolic_trace


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _exponent_list(text: str) -> list:
    out = []
    for tok in text.replace(",", " ").split():
        try:
            out.append(Fraction(tok))
        except (ValueError, ZeroDivisionError):
            raise argparse.ArgumentTypeError(f"bad exponent {tok!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gw", description="Positivity of eigenvalues of generalized words in two PD matrices.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="classify one word")
    c.add_argument("word")
    c.add_argument("--refute", action="store_true", help="search for a numeric witness when undecided")
    c.add_argument("--witness", action="store_true", help="also search a witness for theorem-bad words")
    c.add_argument("--samples", type=int, default=200)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--json", action="store_true")
    c.add_argument("--timings", action="store_true", help="include wall-clock timings in JSON output")

    s = sub.add_parser("sweep", help="classify all words of a class")
    s.add_argument("--class", dest="k", type=int, required=True)
    s.add_argument("--exponents", type=_exponent_list, required=True, help="e.g. '-2,-1,1,2'")
    s.add_argument("--out")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--refute", action="store_true")
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)

    j = sub.add_parser("conjecture", help="escalate refutation on words that are not nearly symmetric")
    j.add_argument("--class", dest="k", type=int, required=True)
    j.add_argument("--exponents", type=_exponent_list, required=True)
    j.add_argument("--budget", type=int, default=256)
    j.add_argument("--seed", type=int, default=0)

    t = sub.add_parser("trace", help="symbolic trace expansion as JSON")
    t.add_argument("word")
    t.add_argument("--mode", choices=("general", "positive"), default="general")
    src = t.add_mutually_exclusive_group()
    src.add_argument("--paper-u", action="store_true", help="use the fixed 3x3 unitary (default)")
    src.add_argument("--seed", type=int, help="use a Haar unitary drawn from this seed")
    t.add_argument("--imag", action="store_true", help="emit only the imaginary part")
    t.add_argument("--merge", action="store_true", help="identify x-type and y-type variables")
    return parser


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _cmd_classify(args, out):
    rep = classify(args.word, refute_search=args.refute, witness=args.witness, samples=args.samples, seed=args.seed)
    if args.json:
        out.write(_dump(rep.to_dict(timings=args.timings)) + "\n")
        return
    out.write(f"{rep.standard_form}  class {rep.class_number}  {rep.verdict}")
    out.write(f" ({rep.reason})\n" if rep.reason else "\n")
    if rep.split:
        out.write(f"  split: rotate {rep.split['rotation']}, [{rep.split['left']}] [{rep.split['right']}]\n")
    if rep.exactness:
        ex = rep.exactness
        out.write(f"  L = {ex['l_values']}  odd {ex['count_odd']} even {ex['count_even']}  exact {ex['exact']}\n")
    if rep.relations:
        out.write(f"  nontrivial relations: {rep.relations['nontrivial']}\n")
    if rep.counterexample:
        out.write(f"  witness: {rep.counterexample['construction']}  {rep.counterexample['evidence']}\n")
    if rep.note:
        out.write(f"  note: {rep.note}\n")


def _cmd_sweep(args, out):
    reports, summary = sweep(args.k, args.exponents, refute_search=args.refute, samples=args.samples, seed=args.seed)
    if args.format == "json":
        text = _dump({"rows": [r.to_dict() for r in reports], "summary": summary}) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for r in reports:
            writer.writerow(r.csv_row())
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    sys.stderr.write(" ".join(f"{k}={v}" for k, v in summary.items()) + "\n")


def _cmd_conjecture(args, out):
    out.write(_dump(conjecture_check(args.k, args.exponents, budget=args.budget, seed=args.seed)) + "\n")


def _cmd_trace(args, out):
    w = standard_form(parse_word(args.word))
    if args.mode == "positive" and not w.is_positive:
        raise UsageError("positive mode needs a word with positive exponents")
    if len(w.blocks) < 2:
        raise UsageError("trace expansion needs class number >= 1")
    U = paper_unitary() if args.seed is None else haar_unitary(3, seed=args.seed)
    exp = symbolic_trace(w, Parameterization.from_unitary(U, args.mode))
    data = exp.to_dict()
    poly = exp.poly
    if args.merge:
        mapping = {"x1": "x", "x2": "x", "y1": "y", "y2": "y"} if args.mode == "general" else {"x": "t", "y": "t"}
        poly = merge_variables(poly, mapping)
        data.pop("provenance")
    if args.imag:
        poly = imaginary_part(poly)
        data.pop("provenance", None)
    data["poly"] = poly.to_dict()
    out.write(_dump(data) + "\n")


COMMANDS = {
    "classify": _cmd_classify,
    "sweep": _cmd_sweep,
    "conjecture": _cmd_conjecture,
    "trace": _cmd_trace,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args, out)
    except (WordSyntaxError, UsageError, SweepTooLarge) as exc:
        sys.stderr.write(f"gw: {exc}\n")
        return 1
    except (EigenvalueError, NotPositiveDefinite, FloatingPointError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"gw: numeric failure: {exc}\n")
        return 2
    return 0


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
