"""Scan accounting and the side-by-side comparison report.

A *scan* is one containment test of one candidate against one transaction.
TID-list probes performed by the intersection miner are tallied in a
separate counter and never folded into the scan count.
"""
from __future__ import annotations

import io
import json
import threading
from dataclasses import dataclass, field

from .candidates import JoinKind, JoinStrategy, DEFAULT_STRATEGY
from .dataset import TransactionDatabase

__all__ = [
    "AlgorithmStats",
    "ComparisonReport",
    "REPORT_SCHEMA",
    "ScanLedger",
    "compare",
    "render_report",
    "report_from_json",
]

REPORT_SCHEMA = "aprioriscan.compare/1"
COMPARED = ("classic", "filtered", "intersect")


@dataclass
class ScanLedger:
    level_scans: dict[int, int] = field(default_factory=dict)
    level_tid_comparisons: dict[int, int] = field(default_factory=dict)
    _lock: threading.Lock = field(
        default_factory=threading.Lock, init=False, repr=False, compare=False
    )

    def add_scans(self, k: int, n: int) -> None:
        if n < 0:
            raise ValueError("scan increments must be non-negative")
        with self._lock:
            self.level_scans[k] = self.level_scans.get(k, 0) + int(n)

    def add_tid_comparisons(self, k: int, n: int) -> None:
        if n < 0:
            raise ValueError("comparison increments must be non-negative")
        with self._lock:
            self.level_tid_comparisons[k] = self.level_tid_comparisons.get(k, 0) + int(n)

    def open_level(self, k: int) -> None:
        """Register level ``k`` so it is reported even if nothing is counted."""
        with self._lock:
            self.level_scans.setdefault(k, 0)
            self.level_tid_comparisons.setdefault(k, 0)

    @property
    def total_scans(self) -> int:
        return sum(self.level_scans.values())

    @property
    def total_tid_comparisons(self) -> int:
        return sum(self.level_tid_comparisons.values())

    @property
    def depth(self) -> int:
        return max(self.level_scans, default=0)

    def scans_by_level(self, depth: int | None = None) -> list[int]:
        depth = self.depth if depth is None else depth
        return [self.level_scans.get(k, 0) for k in range(1, depth + 1)]

    def tid_comparisons_by_level(self, depth: int | None = None) -> list[int]:
        depth = self.depth if depth is None else depth
        return [self.level_tid_comparisons.get(k, 0) for k in range(1, depth + 1)]


@dataclass
class AlgorithmStats:
    name: str
    scans: list[int]
    tid_comparisons: list[int]
    frequent: list[int]
    time_ms: list[float]

    @property
    def total_scans(self) -> int:
        return sum(self.scans)

    @property
    def total_tid_comparisons(self) -> int:
        return sum(self.tid_comparisons)

    @property
    def total_ms(self) -> float:
        return sum(self.time_ms)


@dataclass
class ComparisonReport:
    transactions: int
    items: int
    occurrences: int
    support: int
    strategy: JoinStrategy
    depth: int
    algorithms: dict[str, AlgorithmStats]
    equivalence_verified: bool

    def totals(self) -> tuple[int, ...]:
        return tuple(self.algorithms[a].total_scans for a in COMPARED)

    def scan_matrix(self) -> list[tuple[int, ...]]:
        """Per-algorithm scan rows, in classic/filtered/intersect order."""
        return [tuple(self.algorithms[a].scans) for a in COMPARED]


def compare(
    db: TransactionDatabase,
    support,
    strategy: JoinStrategy = DEFAULT_STRATEGY,
    backend: str | None = None,
) -> ComparisonReport:
    """Run all three level-wise miners single-threaded and tabulate their work."""
    from . import miners

    runs = {
        "classic": miners.mine_classic(db, support, strategy, backend=backend),
        "filtered": miners.mine_filtered(db, support, strategy, backend=backend),
        "intersect": miners.mine_intersect(db, support, strategy, backend=backend),
    }
    depth = max(max(r.ledger.depth, len(r.levels)) for r in runs.values())
    reference = runs["classic"].support_map()
    verified = all(r.support_map() == reference for r in runs.values())
    stats = {}
    for name, r in runs.items():
        sizes = {lvl.k: len(lvl.records) for lvl in r.levels}
        stats[name] = AlgorithmStats(
            name=name,
            scans=r.ledger.scans_by_level(depth),
            tid_comparisons=r.ledger.tid_comparisons_by_level(depth),
            frequent=[sizes.get(k, 0) for k in range(1, depth + 1)],
            time_ms=[r.wall_times.get(k, 0.0) * 1e3 for k in range(1, depth + 1)],
        )
    return ComparisonReport(
        transactions=db.transaction_count,
        items=db.item_count,
        occurrences=db.occurrence_count,
        support=runs["classic"].resolved_support,
        strategy=strategy,
        depth=depth,
        algorithms=stats,
        equivalence_verified=verified,
    )


def _report_dict(report: ComparisonReport, timings: bool) -> dict:
    algos = []
    for name in COMPARED:
        a = report.algorithms[name]
        entry = {
            "name": name,
            "scans": a.scans,
            "total_scans": a.total_scans,
            "tid_comparisons": a.tid_comparisons,
            "total_tid_comparisons": a.total_tid_comparisons,
            "frequent": a.frequent,
        }
        if timings:
            entry["time_ms"] = a.time_ms
            entry["total_ms"] = a.total_ms
        algos.append(entry)
    return {
        "schema": REPORT_SCHEMA,
        "database": {
            "transactions": report.transactions,
            "items": report.items,
            "occurrences": report.occurrences,
        },
        "support": report.support,
        "join": report.strategy.kind.value,
        "prune": report.strategy.prune,
        "levels": report.depth,
        "equivalence_verified": report.equivalence_verified,
        "algorithms": algos,
    }


def report_from_json(data: bytes | str) -> ComparisonReport:
    doc = json.loads(data)
    if doc.get("schema") != REPORT_SCHEMA:
        raise ValueError(f"unsupported report schema {doc.get('schema')!r}")
    depth = doc["levels"]
    algorithms = {
        a["name"]: AlgorithmStats(
            name=a["name"],
            scans=list(a["scans"]),
            tid_comparisons=list(a["tid_comparisons"]),
            frequent=list(a["frequent"]),
            time_ms=list(a.get("time_ms", [0.0] * depth)),
        )
        for a in doc["algorithms"]
    }
    return ComparisonReport(
        transactions=doc["database"]["transactions"],
        items=doc["database"]["items"],
        occurrences=doc["database"]["occurrences"],
        support=doc["support"],
        strategy=JoinStrategy(JoinKind(doc["join"]), doc["prune"]),
        depth=depth,
        algorithms=algorithms,
        equivalence_verified=doc["equivalence_verified"],
    )


def _tsv_block(out, title, rows, totals, fmt=str):
    out.write("\t".join((title, *COMPARED)) + "\n")
    for k, row in enumerate(rows, 1):
        out.write("\t".join((f"L{k}", *map(fmt, row))) + "\n")
    out.write("\t".join(("total", *map(fmt, totals))) + "\n")


def render_report(report: ComparisonReport, fmt: str = "tsv", timings: bool = False) -> bytes:
    """Render as TSV (levels down, algorithms across) or JSON.

    Wall times are included only when ``timings`` is set, so the default
    output is byte-stable across runs.
    """
    if fmt == "json":
        doc = _report_dict(report, timings)
        return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
    if fmt != "tsv":
        raise ValueError(f"unknown report format {fmt!r}")

    algos = [report.algorithms[a] for a in COMPARED]

    def by_level(attr):
        return list(zip(*(getattr(a, attr) for a in algos)))

    out = io.StringIO()
    out.write(f"transactions\t{report.transactions}\n")
    out.write(f"items\t{report.items}\n")
    out.write(f"occurrences\t{report.occurrences}\n")
    out.write(f"support\t{report.support}\n")
    out.write(f"join\t{report.strategy.kind.value}\n")
    out.write(f"prune\t{str(report.strategy.prune).lower()}\n")
    out.write(f"equivalence_verified\t{str(report.equivalence_verified).lower()}\n")
    out.write("\n")
    _tsv_block(out, "scans", by_level("scans"), [a.total_scans for a in algos])
    out.write("\n")
    _tsv_block(
        out,
        "tid_comparisons",
        by_level("tid_comparisons"),
        [a.total_tid_comparisons for a in algos],
    )
    out.write("\n")
    _tsv_block(out, "frequent", by_level("frequent"), [sum(a.frequent) for a in algos])
    if timings:
        out.write("\n")
        _tsv_block(
            out, "time_ms", by_level("time_ms"), [a.total_ms for a in algos], "{:.3f}".format
        )
    return out.getvalue().encode("utf-8")
