"""Command-line front end.

Character specs::

    spec     := "trivial@" N | "mod=" N ";exps=" [exps]
    exps     := INT ("," INT)*        one per canonical generator of N

N is a positive integer; exponents may be negative and are reduced modulo
the generator orders.  A character whose modulus divides --n is lifted.

Exit codes: 0 all matched, 1 mismatch, 2 usage or parse error, 3 oracle
refused by the cost budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import random
import re
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from .arith import DomainError
from .characters import DirichletCharacter, enumerate_characters, unit_group_structure
from .menon import (
    BRANCHES,
    Agreement,
    MenonQuery,
    MenonReport,
    closed_form_general,
    lemma_route,
    verify,
)
from .oracle import MODES, default_budget

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_REFUSED = 3

REPORT_FIELDS = (
    "n", "r", "s", "characters", "d", "n0", "closed_form", "oracle",
    "agreement", "per_prime_factors", "elapsed_ms",
)

_DIGITS = re.compile(r"\d+")
_INTEGER = re.compile(r"-?\d+")


class CharacterSpecError(ValueError):
    def __init__(self, text: str, position: int, message: str):
        super().__init__(f"bad character spec {text!r} at position {position}: {message}")
        self.text = text
        self.position = position


def parse_character_spec(text: str) -> DirichletCharacter:
    if text.startswith("trivial@"):
        m = _DIGITS.fullmatch(text, 8)
        if not m:
            raise CharacterSpecError(text, 8, "expected a positive modulus")
        n = int(m.group())
        if n == 0:
            raise CharacterSpecError(text, 8, "modulus must be positive")
        return DirichletCharacter.trivial(n)
    if not text.startswith("mod="):
        raise CharacterSpecError(text, 0, "expected 'trivial@<n>' or 'mod=<n>;exps=<e1,...>'")
    m = _DIGITS.match(text, 4)
    if not m:
        raise CharacterSpecError(text, 4, "expected a positive modulus")
    n = int(m.group())
    if n == 0:
        raise CharacterSpecError(text, 4, "modulus must be positive")
    pos = m.end()
    if not text.startswith(";exps=", pos):
        raise CharacterSpecError(text, pos, "expected ';exps='")
    pos = exps_start = pos + 6
    exps = []
    while pos < len(text):
        m = _INTEGER.match(text, pos)
        if not m:
            raise CharacterSpecError(text, pos, "expected an integer exponent")
        exps.append(int(m.group()))
        pos = m.end()
        if pos < len(text):
            if text[pos] != ",":
                raise CharacterSpecError(text, pos, "expected ','")
            pos += 1
            if pos == len(text):
                raise CharacterSpecError(text, pos, "trailing ','")
    ngens = len(unit_group_structure(n).orders)
    if len(exps) != ngens:
        raise CharacterSpecError(
            text, exps_start, f"modulus {n} has {ngens} generators, got {len(exps)} exponents"
        )
    return DirichletCharacter(n, tuple(exps))


def report_row(report: MenonReport, elapsed_ms: float) -> dict:
    row = report.to_dict()
    row["elapsed_ms"] = round(elapsed_ms, 3)
    return row


def _csv_text(rows: Sequence[dict], fields: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for row in rows:
        out = []
        for f in fields:
            v = row[f]
            if f == "characters":
                v = " ".join(v)
            elif f == "per_prime_factors":
                v = " ".join(f"{pp}:{x}" for pp, x in v)
            elif v is None:
                v = ""
            out.append(v)
        w.writerow(out)
    return buf.getvalue()


def _plain_report(row: dict) -> str:
    lines = [
        f"n = {row['n']}, r = {row['r']}, s = {row['s']}",
        f"characters: {' '.join(row['characters'])}",
        f"d = {row['d']}, n0 = {row['n0']}",
        f"closed form: {row['closed_form']}",
        f"oracle: {'skipped' if row['oracle'] is None else row['oracle']}",
        f"agreement: {row['agreement']}",
        "local factors: " + ", ".join(f"{pp} -> {v}" for pp, v in row["per_prime_factors"]),
    ]
    return "\n".join(lines) + "\n"


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _budget(args) -> int:
    return args.budget if args.budget is not None else default_budget()


def _build_query(args) -> MenonQuery:
    if args.char:
        chars = [parse_character_spec(t) for t in args.char]
        if args.s is not None and args.s != len(chars):
            raise DomainError(f"--s {args.s} disagrees with {len(chars)} --char specs")
    elif args.s is not None:
        chars = [DirichletCharacter.trivial(args.n)] * args.s
    else:
        raise DomainError("give at least one --char or --s <count> for trivial characters")
    return MenonQuery(args.n, args.r, tuple(chars))


def _single(args, run_oracle: bool) -> int:
    q = _build_query(args)
    t0 = time.perf_counter()
    report = verify(q, args.mode, _budget(args)) if run_oracle else closed_form_general(q)
    row = report_row(report, (time.perf_counter() - t0) * 1000)
    if args.format == "json":
        text = json.dumps(row) + "\n"
    elif args.format == "csv":
        text = _csv_text([row], REPORT_FIELDS)
    else:
        text = _plain_report(row)
    _emit(args, text)
    if not run_oracle:
        return EXIT_OK
    if report.agreement is Agreement.MISMATCHED:
        return EXIT_MISMATCH
    if report.agreement is Agreement.SKIPPED:
        print(f"oracle refused: {report.refusal}", file=sys.stderr)
        return EXIT_REFUSED
    return EXIT_OK


def cmd_compute(args) -> int:
    return _single(args, run_oracle=False)


def cmd_verify(args) -> int:
    return _single(args, run_oracle=True)


def _sweep_tasks(args):
    rng = random.Random(args.seed)
    for n in range(args.min_n, args.max_n + 1):
        specs = [str(c) for c in enumerate_characters(n)]
        for s in range(1, args.max_s + 1):
            tuples = list(itertools.product(specs, repeat=s))
            if args.sample is not None and len(tuples) > args.sample:
                tuples = rng.sample(tuples, args.sample)
            for r in range(0, args.max_r + 1):
                for tup in tuples:
                    yield (n, r, tup, args.mode, args.budget_value)


def _sweep_one(task):
    n, r, specs, mode, budget = task
    q = MenonQuery(n, r, tuple(parse_character_spec(t) for t in specs))
    t0 = time.perf_counter()
    report = verify(q, mode, budget)
    hits = Counter()
    second = lemma_route(q, hits)
    elapsed = (time.perf_counter() - t0) * 1000
    if second != report.closed_form:
        report.agreement = Agreement.MISMATCHED
    return report_row(report, elapsed), hits


def cmd_sweep(args) -> int:
    args.budget_value = _budget(args)
    tasks = list(_sweep_tasks(args))
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            results = list(pool.map(_sweep_one, tasks, chunksize=64))
    else:
        results = [_sweep_one(t) for t in tasks]
    rows = [row for row, _ in results]
    hits = Counter()
    for _, h in results:
        hits.update(h)
    tally = Counter(row["agreement"] for row in rows)
    summary = {
        "instances": len(rows),
        "matched": tally[Agreement.MATCHED.value],
        "mismatched": tally[Agreement.MISMATCHED.value],
        "oracle_skipped": tally[Agreement.SKIPPED.value],
        "branch_hits": {b: hits[b] for b in BRANCHES},
    }
    if args.format == "json":
        text = json.dumps({"instances": rows, "summary": summary}) + "\n"
    elif args.format == "csv":
        text = _csv_text(rows, REPORT_FIELDS)
    else:
        text = "".join(
            f"{k}: {v}\n" for k, v in summary.items()
        )
        for row in rows:
            if row["agreement"] == Agreement.MISMATCHED.value:
                text += f"MISMATCH n={row['n']} r={row['r']} {' '.join(row['characters'])}: " \
                        f"closed={row['closed_form']} oracle={row['oracle']}\n"
    _emit(args, text)
    if summary["mismatched"]:
        return EXIT_MISMATCH
    if summary["oracle_skipped"]:
        return EXIT_REFUSED
    return EXIT_OK


def cmd_enum_chars(args) -> int:
    rows = [
        {"character": str(c), "order": c.order, "conductor": c.conductor, "primitive": c.is_primitive()}
        for c in enumerate_characters(args.n)
    ]
    if args.format == "json":
        text = json.dumps({"n": args.n, "characters": rows}) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["character", "order", "conductor", "primitive"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        text = buf.getvalue()
    else:
        text = "".join(f"{r['character']}  order={r['order']}  conductor={r['conductor']}\n" for r in rows)
    _emit(args, text)
    return EXIT_OK


def cmd_lemmas(args) -> int:
    from .lemmas import check_b_tuple_counts, check_product_subgroup_sums, check_subgroup_sums

    results = [
        check_subgroup_sums(args.bound),
        check_product_subgroup_sums(args.bound, max_s=args.max_s),
        check_b_tuple_counts(args.b_bound, args.max_r),
    ]
    rows = [
        {"suite": r.name, "checked": r.checked, "failures": len(r.failures), "ok": r.ok,
         "first_failures": r.failures[:5]}
        for r in results
    ]
    if args.format == "json":
        text = json.dumps({"suites": rows}) + "\n"
    elif args.format == "csv":
        text = _csv_text(rows, ("suite", "checked", "failures", "ok"))
    else:
        text = "".join(
            f"{'PASS' if r['ok'] else 'FAIL'}  {r['suite']}: {r['checked']} checked, {r['failures']} failed\n"
            for r in rows
        )
    _emit(args, text)
    return EXIT_OK if all(r.ok for r in results) else EXIT_MISMATCH


def cmd_bench(args) -> int:
    from .bench import run_bench

    rows = [b.to_dict() for b in run_bench(_budget(args))]
    fields = ("n", "s", "r", "oracle_terms", "closed_form_ops", "ratio",
              "closed_form_ms", "oracle_mode", "oracle_ms", "matched")
    if args.format == "json":
        text = json.dumps({"rows": rows}) + "\n"
    elif args.format == "csv":
        text = _csv_text(rows, fields)
    else:
        widths = [max(len(f), *(len(str(r[f])) for r in rows)) for f in fields]
        lines = ["  ".join(f.rjust(w) for f, w in zip(fields, widths))]
        for r in rows:
            lines.append("  ".join(str(r[f]).rjust(w) for f, w in zip(fields, widths)))
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_MISMATCH if any(r["matched"] is False for r in rows) else EXIT_OK


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "plain"), default="json")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--budget", type=_positive, default=None,
                        help="max oracle terms (default $MENON_COST_BUDGET or 10^8)")

    parser = argparse.ArgumentParser(
        prog="menon", description="Evaluate and verify character-weighted Menon-Sury gcd sums."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (
        ("compute", cmd_compute, "closed form only"),
        ("verify", cmd_verify, "closed form and brute-force oracle"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--n", type=_positive, required=True)
        p.add_argument("--r", type=_nonneg, default=0)
        p.add_argument("--char", action="append", default=[], metavar="SPEC")
        p.add_argument("--s", type=_positive, default=None, help="number of trivial characters")
        p.add_argument("--mode", choices=MODES, default="grouped")
        p.set_defaults(func=fn)

    p = sub.add_parser("sweep", parents=[common], help="verify every instance up to bounds")
    p.add_argument("--max-n", type=_positive, required=True)
    p.add_argument("--min-n", type=_positive, default=1)
    p.add_argument("--max-r", type=_nonneg, default=1)
    p.add_argument("--max-s", type=_positive, default=1)
    p.add_argument("--sample", type=_positive, default=None,
                   help="random character tuples per (n, s) instead of all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--mode", choices=MODES, default="grouped")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("enum-chars", parents=[common], help="list the characters mod n")
    p.add_argument("--n", type=_positive, required=True)
    p.set_defaults(func=cmd_enum_chars)

    p = sub.add_parser("lemmas", parents=[common], help="prime-power building-block suites")
    p.add_argument("--bound", type=_positive, default=128, help="largest prime power for character sums")
    p.add_argument("--b-bound", type=_positive, default=64, help="largest prime power for b-tuple counts")
    p.add_argument("--max-r", type=_nonneg, default=3)
    p.add_argument("--max-s", type=_positive, default=3)
    p.set_defaults(func=cmd_lemmas)

    p = sub.add_parser("bench", parents=[common], help="closed form vs oracle timing ladder")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CharacterSpecError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
