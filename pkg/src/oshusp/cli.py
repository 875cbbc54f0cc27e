"""Command-line front end: ``mine``, ``verify``, ``gen`` and ``bench``.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 time or memory
limit hit, 4 oracle refused the input as too large, 5 verify mismatch.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
import time
from decimal import Decimal
from fractions import Fraction

from .ingest import (ConsistencyError, DatasetBundle, GeneratorConfig, ParseError, generate_scaled,
                     head, parse_database, random_database, write_database)
from .model import OT_INTERSECTION, OT_MODES, ThresholdConfig
from .oracle import DEFAULT_BUDGET, OracleBudgetError, score_all, select
from .osums import mine_osums
from .osums_plus import mine_osums_plus
from .report import DEFAULT_TIME_LIMIT, Limits, MiningAborted, MiningReport

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_LIMIT = 3
EXIT_ORACLE_BUDGET = 4
EXIT_MISMATCH = 5

ALGOS = ("osums", "osums-plus", "oracle")
STRATEGIES = {"osums": ("ldp", "lwp", "arc"), "osums-plus": ("gdp", "gwp"), "oracle": ()}
CSV_HEADER = ["algo", "xi", "patterns", "candidates", "time_ms", "peak_mem_bytes", "flags"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def run(algo: str, db, xi, *, disabled=(), max_len=None, limits=None,
        oracle_budget=DEFAULT_BUDGET, ot_mode=OT_INTERSECTION) -> MiningReport:
    """Run one algorithm and return its report, ``max_len`` applied to the output."""
    off = set(disabled)
    bad = off - set(STRATEGIES[algo])
    if bad:
        raise UsageError(f"--no-{sorted(bad)[0]} does not apply to --algo {algo}")
    flags = {s: s not in off for s in STRATEGIES[algo]}
    if algo == "osums":
        report = mine_osums(db, xi, ot_mode=ot_mode, limits=limits, **flags)
    elif algo == "osums-plus":
        report = mine_osums_plus(db, xi, ot_mode=ot_mode, limits=limits, **flags)
    else:
        t0 = time.perf_counter()
        scores = score_all(db, max_len, budget=oracle_budget, ot_mode=ot_mode)
        report = MiningReport("oracle", patterns=select(scores, xi), ot_mode=ot_mode)
        report.candidates_generated = len(scores)
        report.wall_time = time.perf_counter() - t0
    if max_len is not None:
        report.patterns = [m for m in report.patterns if len(m.pattern) <= max_len]
    return report


def _xi_text(x: Fraction) -> str:
    # finite decimals print as "0.3", anything else stays a fraction
    d = x.denominator
    for f in (2, 5):
        while d % f == 0:
            d //= f
    if d != 1:
        return str(x)
    return f"{Decimal(x.numerator) / Decimal(x.denominator):f}"


def summary_row(report: MiningReport, xi) -> list:
    flags = ";".join(f"{k}={'on' if v else 'off'}" for k, v in report.flags.items())
    if report.ot_mode != OT_INTERSECTION:
        flags = ";".join(filter(None, [flags, f"ot={report.ot_mode}"]))
    if report.aborted:
        flags = ";".join(filter(None, [flags, f"aborted={report.aborted}"]))
    return [report.algorithm, _xi_text(ThresholdConfig(xi).xi), len(report.patterns),
            report.candidates_generated, f"{report.wall_time * 1000:.3f}",
            report.peak_live_bytes, flags]


def write_csv(rows, out):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(rows)


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _load(args):
    bundle = DatasetBundle(args.db, args.utils, args.shelf)
    return parse_database(bundle, relax_shelf=args.relax_shelf)


def _limits(args) -> Limits:
    return Limits(time_limit=args.time_limit, max_live_bytes=args.max_mem)


def _add_input(p, threshold=True):
    p.add_argument("--db", required=True, help="database file")
    p.add_argument("--utils", required=True, help="utility (profit) file")
    p.add_argument("--shelf", help="shelf file; derived from occurrences when omitted")
    p.add_argument("--relax-shelf", action="store_true",
                   help="widen shelf sets to cover occurrences instead of failing")
    p.add_argument("--ot-mode", choices=OT_MODES, default=OT_INTERSECTION,
                   help="how a pattern's on-shelf periods combine its items' (default %(default)s)")
    if threshold:
        p.add_argument("--threshold", required=True, help="minimum on-shelf utility ratio in (0, 1]")


def _add_limits(p):
    p.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT, metavar="SEC")
    p.add_argument("--max-mem", type=int, default=None, metavar="BYTES",
                   help="abort when the live chain/tree byte counter exceeds this")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="oshusp", description="On-shelf high-utility sequential pattern mining.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mine", help="mine patterns with one algorithm")
    p.add_argument("--algo", choices=ALGOS, default="osums-plus")
    _add_input(p)
    p.add_argument("--out", help="pattern output file (default stdout)")
    for s in ("ldp", "lwp", "arc", "gdp", "gwp"):
        p.add_argument(f"--no-{s}", dest=f"no_{s}", action="store_true", help=f"disable {s.upper()}")
    p.add_argument("--max-len", type=int, help="only report patterns of at most this many items")
    p.add_argument("--stats", help="write a one-row run summary CSV here")
    p.add_argument("--oracle-budget", type=int, default=DEFAULT_BUDGET)
    _add_limits(p)

    p = sub.add_parser("verify", help="check that all three algorithms agree")
    _add_input(p)
    p.add_argument("--max-len", type=int)
    p.add_argument("--oracle-budget", type=int, default=DEFAULT_BUDGET)

    p = sub.add_parser("gen", help="write a scaled synthetic dataset")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--base", help="base dataset prefix (or its .db file)")
    src.add_argument("--random-base", type=int, metavar="N",
                     help="synthesize an N-sequence random base instead")
    p.add_argument("--items", type=int, default=40, help="item count for --random-base")
    p.add_argument("--relax-shelf", action="store_true")
    p.add_argument("--scale", type=int, default=1)
    p.add_argument("--periods", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-prefix", required=True)

    p = sub.add_parser("bench", help="run summaries over thresholds and ablations")
    _add_input(p, threshold=False)
    p.add_argument("--thresholds", required=True, help="comma-separated list")
    p.add_argument("--algos", default="osums,osums-plus", help="comma-separated subset of " + ",".join(ALGOS))
    p.add_argument("--ablate", action="store_true",
                   help="add one row per strategy with that strategy disabled")
    p.add_argument("--sample", type=int, metavar="N", help="use only the first N q-sequences")
    p.add_argument("--out", help="CSV output file (default stdout)")
    p.add_argument("--oracle-budget", type=int, default=DEFAULT_BUDGET)
    _add_limits(p)
    return parser


def cmd_mine(args) -> int:
    disabled = [s for s in ("ldp", "lwp", "arc", "gdp", "gwp") if getattr(args, f"no_{s}")]
    bad = set(disabled) - set(STRATEGIES[args.algo])
    if bad:
        print(f"oshusp mine: error: --no-{sorted(bad)[0]} does not apply to --algo {args.algo}",
              file=sys.stderr)
        return EXIT_USAGE
    xi = ThresholdConfig(args.threshold)
    db = _load(args)
    try:
        report = run(args.algo, db, xi, disabled=disabled, max_len=args.max_len,
                     limits=_limits(args), oracle_budget=args.oracle_budget, ot_mode=args.ot_mode)
    except MiningAborted as e:
        print(f"oshusp mine: {e}", file=sys.stderr)
        if args.stats:
            with open(args.stats, "w", encoding="utf-8") as f:
                write_csv([summary_row(e.report, xi)], f)
        return EXIT_LIMIT
    except OracleBudgetError as e:
        print(f"oshusp mine: {e}", file=sys.stderr)
        return EXIT_ORACLE_BUDGET
    out, close = _open_out(args.out)
    try:
        for m in report.sorted_patterns():
            out.write(m.format() + "\n")
    finally:
        if close:
            out.close()
    if args.stats:
        with open(args.stats, "w", encoding="utf-8") as f:
            write_csv([summary_row(report, xi)], f)
    return EXIT_OK


def cmd_verify(args) -> int:
    xi = ThresholdConfig(args.threshold)
    db = _load(args)
    try:
        reports = {a: run(a, db, xi, max_len=args.max_len, oracle_budget=args.oracle_budget,
                          ot_mode=args.ot_mode) for a in ("oracle", "osums", "osums-plus")}
    except OracleBudgetError as e:
        print(f"oshusp verify: {e}", file=sys.stderr)
        return EXIT_ORACLE_BUDGET
    truth = reports["oracle"].result_set()
    ok = True
    for algo in ("osums", "osums-plus"):
        got = reports[algo].result_set()
        if got == truth:
            continue
        ok = False
        for r, ou in sorted(got - truth, key=lambda x: x[0].sort_key()):
            print(f"only in {algo}\t{r}\t{ou}")
        for r, ou in sorted(truth - got, key=lambda x: x[0].sort_key()):
            print(f"only in oracle\t{r}\t{ou}\t(missing from {algo})")
    if ok:
        print(f"ok: {len(truth)} patterns, all algorithms agree")
        return EXIT_OK
    return EXIT_MISMATCH


def cmd_gen(args) -> int:
    if args.base is not None:
        prefix = args.base[:-3] if args.base.endswith(".db") else args.base
        base = parse_database(DatasetBundle.from_prefix(prefix), relax_shelf=args.relax_shelf)
    else:
        base = random_database(args.random_base, args.items, max_itemsets=6, max_itemset_size=4,
                               n_periods=args.periods, seed=args.seed)
    if args.periods < 1:
        raise ValueError("--periods must be >= 1")
    db = generate_scaled(GeneratorConfig(base, args.scale, args.periods, args.seed))
    d = os.path.dirname(args.out_prefix)
    if d:
        os.makedirs(d, exist_ok=True)
    bundle = write_database(db, args.out_prefix)
    print(f"wrote {len(db)} q-sequences to {bundle.database}")
    return EXIT_OK


def _variants(algo: str, ablate: bool) -> list[tuple[str, ...]]:
    out = [()]
    if ablate:
        out += [(s,) for s in STRATEGIES[algo]]
    return out


def cmd_bench(args) -> int:
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    unknown = [a for a in algos if a not in ALGOS]
    if unknown:
        print(f"oshusp bench: error: unknown algorithm {unknown[0]!r}", file=sys.stderr)
        return EXIT_USAGE
    thresholds = [ThresholdConfig(x.strip()) for x in args.thresholds.split(",") if x.strip()]
    if not thresholds:
        raise ValueError("--thresholds is empty")
    db = _load(args)
    if args.sample is not None:
        db = head(db, args.sample)
    rows = []
    for algo in algos:
        for xi in thresholds:
            for off in _variants(algo, args.ablate):
                try:
                    report = run(algo, db, xi, disabled=off, limits=_limits(args),
                                 oracle_budget=args.oracle_budget, ot_mode=args.ot_mode)
                except MiningAborted as e:
                    report = e.report
                except OracleBudgetError:
                    report = MiningReport("oracle", aborted="oracle budget", ot_mode=args.ot_mode)
                rows.append(summary_row(report, xi))
    out, close = _open_out(args.out)
    try:
        write_csv(rows, out)
    finally:
        if close:
            out.close()
    return EXIT_OK


COMMANDS = {"mine": cmd_mine, "verify": cmd_verify, "gen": cmd_gen, "bench": cmd_bench}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"oshusp {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ConsistencyError, ValueError, OSError) as e:
        print(f"oshusp {args.command}: {e}", file=sys.stderr)
        return EXIT_INVALID


def entry():
    sys.exit(main())
