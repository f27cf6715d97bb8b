"""Level-wise frequent itemset miners.

Three Apriori variants share one loop and differ only in how a level's
candidates are counted:

``mine_classic``
    every candidate is tested against every transaction.
``mine_filtered``
    every candidate is tested only against the transactions holding its
    least-supported member item.
``mine_intersect``
    a candidate's support is the length of the intersection of its members'
    TID lists; no transaction is examined after level 1.

``mine_oracle`` is a brute-force enumerator used as ground truth in tests.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

import numpy as np

from . import _kernels
from .candidates import CandidateSet, Itemset, JoinStrategy, DEFAULT_STRATEGY, join
from .dataset import TransactionDatabase
from .metrics import ScanLedger

__all__ = [
    "Algorithm",
    "FrequentItemsetRecord",
    "FrequentLevel",
    "MiningResult",
    "OracleTooLarge",
    "SupportThreshold",
    "frequent_one",
    "mine",
    "mine_classic",
    "mine_filtered",
    "mine_intersect",
    "mine_oracle",
    "resolve_support",
]

ORACLE_MAX_CANDIDATES = 1_000_000


class Algorithm(str, Enum):
    CLASSIC = "classic"
    FILTERED = "filtered"
    INTERSECT = "intersect"
    ORACLE = "oracle"


class OracleTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class SupportThreshold:
    """Minimum support, either an absolute count or a fraction of transactions."""

    value: float
    relative: bool = False

    @classmethod
    def absolute(cls, count: int) -> "SupportThreshold":
        return cls(count, relative=False)

    @classmethod
    def fraction(cls, frac: float) -> "SupportThreshold":
        return cls(frac, relative=True)

    def resolve(self, transaction_count: int) -> int:
        if self.relative:
            if not 0 < self.value <= 1:
                raise ValueError(f"support fraction must be in (0, 1], got {self.value}")
            # round first so 1/3 * 9 resolves to 3, not 4
            s = math.ceil(round(self.value * transaction_count, 9))
            return max(s, 1)
        if self.value != int(self.value) or self.value < 1:
            raise ValueError(f"absolute support must be an integer >= 1, got {self.value}")
        return int(self.value)


def resolve_support(support, transaction_count: int) -> int:
    """Accept an int count or a :class:`SupportThreshold`; return the count."""
    if isinstance(support, SupportThreshold):
        return support.resolve(transaction_count)
    if isinstance(support, bool) or not isinstance(support, (int, np.integer)):
        raise TypeError(f"support must be an int or SupportThreshold, not {type(support).__name__}")
    return SupportThreshold.absolute(int(support)).resolve(transaction_count)


@dataclass(frozen=True, eq=False)
class FrequentItemsetRecord:
    itemset: Itemset
    support: int
    tids: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class FrequentLevel:
    k: int
    records: tuple[FrequentItemsetRecord, ...]

    def __len__(self) -> int:
        return len(self.records)

    def itemsets(self) -> list[Itemset]:
        return [r.itemset for r in self.records]

    def support_map(self) -> dict[Itemset, int]:
        return {r.itemset: r.support for r in self.records}


@dataclass(eq=False)
class MiningResult:
    algorithm: Algorithm
    strategy: JoinStrategy | None
    resolved_support: int
    levels: list[FrequentLevel]
    ledger: ScanLedger
    wall_times: dict[int, float] = field(default_factory=dict)
    candidate_counts: dict[int, int] = field(default_factory=dict)

    @property
    def itemset_count(self) -> int:
        return sum(len(lvl) for lvl in self.levels)

    def support_map(self) -> dict[Itemset, int]:
        out = {}
        for lvl in self.levels:
            out.update(lvl.support_map())
        return out

    def records(self):
        for lvl in self.levels:
            yield from lvl.records


def frequent_one(
    db: TransactionDatabase, s, ledger: ScanLedger | None = None
) -> FrequentLevel:
    """L1 from the vertical index.

    The ledger is charged one scan per (item, transaction) pair: each item in
    the universe is counted against every transaction.
    """
    s = resolve_support(s, db.transaction_count)
    if ledger is not None:
        ledger.add_scans(1, db.item_count * db.transaction_count)
    records = tuple(
        FrequentItemsetRecord((i,), int(sup), db.tid_list(i))
        for i, sup in enumerate(db.supports)
        if sup >= s
    )
    return FrequentLevel(1, records)


def _split(n: int, threads: int) -> list[slice]:
    if threads <= 1 or n < 2 * threads:
        return [slice(0, n)]
    step = -(-n // threads)
    return [slice(lo, min(lo + step, n)) for lo in range(0, n, step)]


def _map_chunks(fn, n: int, threads: int):
    parts = _split(n, threads)
    if len(parts) == 1:
        return [fn(parts[0])]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, parts))


def _count_classic(db, cands, prev, ledger, kernels, threads):
    arr = cands.as_array()
    parts = _map_chunks(lambda sl: kernels.count_all(db, arr[sl]), len(arr), threads)
    ledger.add_scans(cands.size_k, sum(checks for _, checks in parts))
    return np.concatenate([c for c, _ in parts]), None


def min_support_item(candidate: Itemset, supports) -> int:
    """Member with the smallest support; ties go to the smaller item id."""
    return min(candidate, key=lambda i: (supports[i], i))


def _count_filtered(db, cands, prev, ledger, kernels, threads):
    arr = cands.as_array()
    supports = db.supports
    pivots = np.fromiter(
        (min_support_item(c, supports) for c in cands), dtype=np.int64, count=len(cands)
    )
    parts = _map_chunks(
        lambda sl: kernels.count_filtered(db, arr[sl], pivots[sl]), len(arr), threads
    )
    ledger.add_scans(cands.size_k, sum(checks for _, checks in parts))
    return np.concatenate([c for c, _ in parts]), None


def _level_tids(level: FrequentLevel):
    index = {}
    lengths = np.zeros(len(level.records) + 1, dtype=np.int64)
    for j, r in enumerate(level.records):
        index[r.itemset] = j
        lengths[j + 1] = len(r.tids)
    indptr = np.cumsum(lengths)
    tids = np.concatenate([r.tids for r in level.records]).astype(np.int64)
    return index, indptr, tids


def _count_intersect(db, cands, prev, ledger, kernels, threads):
    # each candidate = a cached (k-1)-itemset from prev plus one item
    index, p_indptr, p_tids = _level_tids(prev)
    n = len(cands)
    parents = np.empty(n, dtype=np.int64)
    items = np.empty(n, dtype=np.int64)
    for c, cand in enumerate(cands):
        for j in range(len(cand) - 1, -1, -1):
            parent = index.get(cand[:j] + cand[j + 1 :])
            if parent is not None:
                parents[c] = parent
                items[c] = cand[j]
                break
        else:
            raise AssertionError(f"candidate {cand} has no frequent parent")

    def run(sl):
        return kernels.intersect_batch(p_indptr, p_tids, parents[sl], db, items[sl])

    ledger.open_level(cands.size_k)
    ptrs, chunks, base = [np.zeros(1, np.int64)], [], 0
    for o_ptr, o_tids, comparisons in _map_chunks(run, n, threads):
        ledger.add_tid_comparisons(cands.size_k, comparisons)
        ptrs.append(o_ptr[1:] + base)
        chunks.append(o_tids)
        base += len(o_tids)
    indptr = np.concatenate(ptrs)
    tids = np.concatenate(chunks)
    tids.setflags(write=False)

    def tids_of(j):
        return tids[indptr[j] : indptr[j + 1]]

    return np.diff(indptr), tids_of


_COUNTERS = {
    Algorithm.CLASSIC: _count_classic,
    Algorithm.FILTERED: _count_filtered,
    Algorithm.INTERSECT: _count_intersect,
}


def _levelwise(db, support, strategy, algorithm, backend, threads) -> MiningResult:
    kernels = _kernels.get(backend)
    count = _COUNTERS[algorithm]
    s = resolve_support(support, db.transaction_count)
    ledger = ScanLedger()
    result = MiningResult(algorithm, strategy, s, [], ledger)

    t0 = time.perf_counter()
    level = frequent_one(db, s, ledger)
    ledger.open_level(1)
    result.wall_times[1] = time.perf_counter() - t0
    frequent_items = [r.itemset[0] for r in level.records]
    if level.records:
        result.levels.append(level)

    k = 2
    while level.records:
        t0 = time.perf_counter()
        cands = join(level.itemsets(), frequent_items, strategy, k=k)
        if not cands.itemsets:
            break
        result.candidate_counts[k] = len(cands)
        counts, tids_of = count(db, cands, level, ledger, kernels, threads)
        kept = np.flatnonzero(counts >= s).tolist()
        level = FrequentLevel(
            k,
            tuple(
                FrequentItemsetRecord(
                    cands.itemsets[j], int(counts[j]), tids_of(j) if tids_of else None
                )
                for j in kept
            ),
        )
        result.wall_times[k] = time.perf_counter() - t0
        if level.records:
            result.levels.append(level)
        k += 1
    return result


def mine_classic(
    db: TransactionDatabase,
    support,
    strategy: JoinStrategy = DEFAULT_STRATEGY,
    *,
    backend: str | None = None,
    threads: int = 1,
) -> MiningResult:
    """Apriori counting each candidate against every transaction."""
    return _levelwise(db, support, strategy, Algorithm.CLASSIC, backend, threads)


def mine_filtered(
    db: TransactionDatabase,
    support,
    strategy: JoinStrategy = DEFAULT_STRATEGY,
    *,
    backend: str | None = None,
    threads: int = 1,
) -> MiningResult:
    """Apriori counting each candidate over its rarest member's transactions."""
    return _levelwise(db, support, strategy, Algorithm.FILTERED, backend, threads)


def mine_intersect(
    db: TransactionDatabase,
    support,
    strategy: JoinStrategy = DEFAULT_STRATEGY,
    *,
    backend: str | None = None,
    threads: int = 1,
) -> MiningResult:
    """Apriori with supports taken from TID-list intersections."""
    return _levelwise(db, support, strategy, Algorithm.INTERSECT, backend, threads)


def mine_oracle(
    db: TransactionDatabase,
    support,
    max_k: int | None = None,
    *,
    max_candidates: int = ORACLE_MAX_CANDIDATES,
) -> MiningResult:
    """Exhaustive enumeration over frequent items, counted on Python sets.

    Shares no code with the level-wise miners beyond the database itself.
    """
    m = db.transaction_count
    s = resolve_support(support, m)
    baskets = [frozenset(t.items) for t in db.transactions]
    ledger = ScanLedger()

    t0 = time.perf_counter()
    one = {}
    for i in range(db.item_count):
        one[i] = sum(1 for b in baskets if i in b)
    ledger.add_scans(1, db.item_count * m)
    items = sorted(i for i, n in one.items() if n >= s)
    if max_k is None:
        max_k = len(items)
    projected = sum(math.comb(len(items), k) for k in range(2, max_k + 1))
    if projected > max_candidates:
        raise OracleTooLarge(
            f"oracle would enumerate {projected} itemsets, above the bound of {max_candidates}"
        )

    levels = [
        FrequentLevel(1, tuple(FrequentItemsetRecord((i,), one[i]) for i in items))
    ]
    wall = {1: time.perf_counter() - t0}
    for k in range(2, max_k + 1):
        t0 = time.perf_counter()
        recs = []
        for combo in combinations(items, k):
            need = frozenset(combo)
            n = sum(1 for b in baskets if need <= b)
            ledger.add_scans(k, m)
            if n >= s:
                recs.append(FrequentItemsetRecord(combo, n))
        levels.append(FrequentLevel(k, tuple(recs)))
        wall[k] = time.perf_counter() - t0
    while levels and not levels[-1].records:
        levels.pop()
    return MiningResult(Algorithm.ORACLE, None, s, levels, ledger, wall)


def mine(
    db: TransactionDatabase,
    support,
    algorithm: Algorithm | str = Algorithm.INTERSECT,
    strategy: JoinStrategy = DEFAULT_STRATEGY,
    *,
    backend: str | None = None,
    threads: int = 1,
) -> MiningResult:
    algorithm = Algorithm(algorithm)
    if algorithm is Algorithm.ORACLE:
        return mine_oracle(db, support)
    return _levelwise(db, support, strategy, algorithm, backend, threads)
