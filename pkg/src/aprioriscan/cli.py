"""Command-line interface: ``mine``, ``compare`` and ``gen``.

Exit status is 0 on success, 2 for bad arguments, and 1 for input or mining
failures (including a failed cross-check in ``compare``).
"""
from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path

from . import _kernels
from .candidates import JoinKind, JoinStrategy
from .dataset import (
    DatasetError,
    generate_synthetic,
    parse_basket_csv,
    parse_dat,
    write_dat,
)
from .metrics import compare, render_report
from .miners import Algorithm, MiningResult, SupportThreshold, mine

PROG = "aprioriscan"


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return value


def _fraction(text: str) -> float:
    value = float(text)
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"expected a fraction in (0, 1], got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", default="-", help="input file, '-' for stdin")
    common.add_argument("--input-format", choices=("dat", "csv"), help="default: by extension")
    common.add_argument("--output", "-o", default="-", help="output file, '-' for stdout")
    common.add_argument("--format", choices=("tsv", "json"), default="tsv")
    thr = common.add_mutually_exclusive_group(required=True)
    thr.add_argument("--support", "-s", type=_positive_int, help="absolute minimum support")
    thr.add_argument("--min-frac", type=_fraction, help="minimum support as a fraction")
    common.add_argument("--join", choices=[k.value for k in JoinKind], default="f1")
    common.add_argument("--prune", action="store_true", help="drop candidates with infrequent subsets")
    common.add_argument("--timings", action="store_true", help="include wall times")
    common.add_argument(
        "--backend", choices=("numba", "numpy"), default=None,
        help=f"kernel backend (default {_kernels.default_backend()})",
    )

    p = sub.add_parser("mine", parents=[common], help="mine frequent itemsets")
    p.add_argument(
        "--algorithm", "-a", choices=[a.value for a in Algorithm], default="intersect"
    )
    p.add_argument("--emit-tids", action="store_true", help="list supporting TIDs")
    p.add_argument("--threads", type=_positive_int, default=1)

    sub.add_parser("compare", parents=[common], help="run all three miners side by side")

    g = sub.add_parser("gen", help="write a synthetic .dat database")
    g.add_argument("--txns", type=int, required=True)
    g.add_argument("--items", type=int, required=True)
    g.add_argument("--mean-basket", type=float, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output", "-o", default="-")
    return parser


def _read_db(args):
    if args.input == "-":
        data = sys.stdin.buffer.read()
        fmt = args.input_format or "dat"
    else:
        path = Path(args.input)
        data = path.read_bytes()
        fmt = args.input_format or ("csv" if path.suffix.lower() == ".csv" else "dat")
    return parse_basket_csv(data) if fmt == "csv" else parse_dat(data)


def _write(args, payload: bytes) -> None:
    if args.output == "-":
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    else:
        Path(args.output).write_bytes(payload)


def _support(args):
    if args.support is not None:
        return SupportThreshold.absolute(args.support)
    return SupportThreshold.fraction(args.min_frac)


def _strategy(args) -> JoinStrategy:
    return JoinStrategy(JoinKind(args.join), args.prune)


def render_mining(db, result: MiningResult, fmt="tsv", emit_tids=False, timings=False) -> bytes:
    ledger = result.ledger
    depth = ledger.depth
    strategy = result.strategy
    n = result.itemset_count
    if fmt == "json":
        doc = {
            "algorithm": result.algorithm.value,
            "join": strategy.kind.value if strategy else None,
            "prune": strategy.prune if strategy else None,
            "support": result.resolved_support,
            "transactions": db.transaction_count,
            "frequent_itemsets": n,
            "levels": [
                {
                    "k": lvl.k,
                    "itemsets": [
                        {
                            "items": db.labels_of(r.itemset),
                            "support": r.support,
                            **(
                                {"tids": [db.tid_label(int(t)) for t in r.tids]}
                                if emit_tids and r.tids is not None
                                else {}
                            ),
                        }
                        for r in lvl.records
                    ],
                }
                for lvl in result.levels
            ],
            "ledger": {
                "scans": ledger.scans_by_level(),
                "total_scans": ledger.total_scans,
                "tid_comparisons": ledger.tid_comparisons_by_level(),
                "total_tid_comparisons": ledger.total_tid_comparisons,
            },
        }
        if timings:
            doc["time_ms"] = [result.wall_times.get(k, 0.0) * 1e3 for k in range(1, depth + 1)]
        return (json.dumps(doc, indent=2) + "\n").encode("utf-8")

    out = io.StringIO()
    out.write(f"algorithm\t{result.algorithm.value}\n")
    if strategy is not None:
        out.write(f"join\t{strategy.kind.value}\n")
        out.write(f"prune\t{str(strategy.prune).lower()}\n")
    out.write(f"support\t{result.resolved_support}\n")
    out.write(f"transactions\t{db.transaction_count}\n\n")
    out.write("k\titemset\tsupport" + ("\ttids" if emit_tids else "") + "\n")
    for lvl in result.levels:
        for r in lvl.records:
            row = f"{lvl.k}\t{' '.join(db.labels_of(r.itemset))}\t{r.support}"
            if emit_tids:
                tids = "" if r.tids is None else " ".join(db.tid_label(int(t)) for t in r.tids)
                row += f"\t{tids}"
            out.write(row + "\n")
    out.write("\nlevel\tscans\ttid_comparisons" + ("\ttime_ms" if timings else "") + "\n")
    scans = ledger.scans_by_level()
    comps = ledger.tid_comparisons_by_level()
    for k in range(1, depth + 1):
        row = f"L{k}\t{scans[k - 1]}\t{comps[k - 1]}"
        if timings:
            row += f"\t{result.wall_times.get(k, 0.0) * 1e3:.3f}"
        out.write(row + "\n")
    total = f"total\t{ledger.total_scans}\t{ledger.total_tid_comparisons}"
    if timings:
        total += f"\t{sum(result.wall_times.values()) * 1e3:.3f}"
    out.write(total + "\n\n")
    out.write(f"{n} frequent itemsets\n")
    return out.getvalue().encode("utf-8")


def run_mine(args) -> int:
    db = _read_db(args)
    algorithm = Algorithm(args.algorithm)
    if algorithm is Algorithm.ORACLE and (args.join != "f1" or args.prune):
        print(f"{PROG}: note: --join/--prune are ignored by the oracle", file=sys.stderr)
    result = mine(
        db, _support(args), algorithm, _strategy(args),
        backend=args.backend, threads=args.threads,
    )
    _write(args, render_mining(db, result, args.format, args.emit_tids, args.timings))
    return 0


def run_compare(args) -> int:
    db = _read_db(args)
    report = compare(db, _support(args), _strategy(args), backend=args.backend)
    _write(args, render_report(report, args.format, timings=args.timings))
    if not report.equivalence_verified:
        print(f"{PROG}: error: miners disagree on frequent itemsets", file=sys.stderr)
        return 1
    return 0


def run_gen(args) -> int:
    try:
        db = generate_synthetic(args.txns, args.items, args.mean_basket, args.seed)
    except DatasetError as exc:
        raise UsageError(str(exc)) from exc
    _write(args, write_dat(db))
    return 0


_COMMANDS = {"mine": run_mine, "compare": run_compare, "gen": run_gen}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except (DatasetError, OSError, ValueError, UnicodeDecodeError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
