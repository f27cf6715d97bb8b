"""Wall-time comparison of the numba and numpy kernel backends.

    python benchmarks/bench_backends.py --txns 10000 --items 100 --mean-basket 8 --min-frac 0.05

Prints one row per (backend, algorithm) with the median of ``--runs`` timings
and the scan totals, which must agree across backends.
"""
from __future__ import annotations

import argparse
import statistics
import time

from aprioriscan import _kernels
from aprioriscan.dataset import generate_synthetic
from aprioriscan.miners import SupportThreshold, mine_classic, mine_filtered, mine_intersect

MINERS = {"classic": mine_classic, "filtered": mine_filtered, "intersect": mine_intersect}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--txns", type=int, default=10_000)
    p.add_argument("--items", type=int, default=100)
    p.add_argument("--mean-basket", type=float, default=8.0)
    p.add_argument("--seed", type=int, default=20240601)
    p.add_argument("--min-frac", type=float, default=0.05)
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--algorithms", nargs="+", choices=list(MINERS), default=list(MINERS))
    args = p.parse_args(argv)

    db = generate_synthetic(args.txns, args.items, args.mean_basket, args.seed)
    support = SupportThreshold.fraction(args.min_frac)
    backends = ["numpy"] + (["numba"] if _kernels.NUMBA_AVAILABLE else [])
    print(f"# {db.transaction_count} transactions, {db.item_count} items, "
          f"support {support.resolve(db.transaction_count)}")
    print("backend\talgorithm\tmedian_s\tscans\ttid_comparisons\titemsets")
    for backend in backends:
        for name in args.algorithms:
            miner = MINERS[name]
            miner(db, support, backend=backend)  # warm-up / JIT
            times = []
            for _ in range(args.runs):
                t0 = time.perf_counter()
                result = miner(db, support, backend=backend)
                times.append(time.perf_counter() - t0)
            print(f"{backend}\t{name}\t{statistics.median(times):.4f}\t"
                  f"{result.ledger.total_scans}\t{result.ledger.total_tid_comparisons}\t"
                  f"{result.itemset_count}")


if __name__ == "__main__":
    main()
