"""Transaction databases: loading, validation, and the horizontal/vertical layouts.

Items and transactions are both addressed by dense 0-based integers. External
labels (the strings found in input files) live in an :class:`ItemDictionary`;
TID labels are kept only for display.
"""
from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "DatasetError",
    "ItemDictionary",
    "Transaction",
    "TransactionDatabase",
    "generate_synthetic",
    "load",
    "load_table1",
    "parse_basket_csv",
    "parse_dat",
    "tid_list",
    "write_dat",
]

_INT_TOKEN = re.compile(r"[0-9]+")


class DatasetError(ValueError):
    """Malformed input or invalid dataset parameters."""


@dataclass(frozen=True)
class ItemDictionary:
    """Bijection between external item labels and dense item ids."""

    labels: tuple[str, ...] = ()
    forward: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        forward = {label: i for i, label in enumerate(self.labels)}
        if len(forward) != len(self.labels):
            raise DatasetError("duplicate item label in dictionary")
        object.__setattr__(self, "forward", forward)

    def __len__(self) -> int:
        return len(self.labels)

    def id_of(self, label: str) -> int:
        try:
            return self.forward[label]
        except KeyError:
            raise KeyError(f"unknown item label {label!r}") from None

    def label_of(self, item: int) -> str:
        return self.labels[item]


class Transaction(NamedTuple):
    tid: int
    items: tuple[int, ...]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class TransactionDatabase:
    """Immutable basket database.

    The horizontal store is CSR: transaction ``t`` holds
    ``items[indptr[t]:indptr[t + 1]]`` sorted ascending. The vertical index is
    the same structure transposed: item ``i`` occurs in transactions
    ``v_tids[v_indptr[i]:v_indptr[i + 1]]``.
    """

    indptr: np.ndarray
    items: np.ndarray
    v_indptr: np.ndarray
    v_tids: np.ndarray
    dictionary: ItemDictionary
    tid_labels: tuple[str, ...] | None = None

    @classmethod
    def from_baskets(
        cls,
        baskets: Iterable[Iterable[str]],
        tid_labels: Sequence[str] | None = None,
    ) -> "TransactionDatabase":
        """Build a database from label baskets; ids are assigned first-seen."""
        forward: dict[str, int] = {}
        rows: list[list[int]] = []
        for basket in baskets:
            ids = set()
            for label in basket:
                item = forward.get(label)
                if item is None:
                    item = forward[label] = len(forward)
                ids.add(item)
            rows.append(sorted(ids))
        if tid_labels is not None:
            tid_labels = tuple(tid_labels)
            if len(tid_labels) != len(rows):
                raise DatasetError("tid_labels length does not match basket count")
        return cls._from_rows(rows, ItemDictionary(tuple(forward)), tid_labels)

    @classmethod
    def _from_rows(cls, rows, dictionary, tid_labels=None) -> "TransactionDatabase":
        n_items = len(dictionary)
        lengths = np.fromiter((len(r) for r in rows), dtype=np.int64, count=len(rows))
        indptr = np.zeros(len(rows) + 1, dtype=np.int64)
        np.cumsum(lengths, out=indptr[1:])
        items = np.fromiter(
            (i for r in rows for i in r), dtype=np.int64, count=int(indptr[-1])
        )
        tids = np.repeat(np.arange(len(rows), dtype=np.int64), lengths)
        # stable sort keeps tids ascending within each item
        order = np.argsort(items, kind="stable")
        v_tids = tids[order]
        v_indptr = np.zeros(n_items + 1, dtype=np.int64)
        np.cumsum(np.bincount(items, minlength=n_items), out=v_indptr[1:])
        return cls(
            _frozen(indptr),
            _frozen(items),
            _frozen(v_indptr),
            _frozen(v_tids),
            dictionary,
            tid_labels,
        )

    @property
    def transaction_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def item_count(self) -> int:
        return len(self.dictionary)

    @property
    def occurrence_count(self) -> int:
        return int(self.indptr[-1])

    def __len__(self) -> int:
        return self.transaction_count

    def transaction(self, tid: int) -> Transaction:
        lo, hi = self.indptr[tid], self.indptr[tid + 1]
        return Transaction(tid, tuple(int(i) for i in self.items[lo:hi]))

    @property
    def transactions(self) -> list[Transaction]:
        return [self.transaction(t) for t in range(self.transaction_count)]

    def tid_list(self, item: int) -> np.ndarray:
        if not 0 <= item < self.item_count:
            raise KeyError(f"unknown item id {item}")
        return self.v_tids[self.v_indptr[item] : self.v_indptr[item + 1]]

    @property
    def vertical(self) -> dict[int, np.ndarray]:
        return {i: self.tid_list(i) for i in range(self.item_count)}

    @cached_property
    def supports(self) -> np.ndarray:
        return _frozen(np.diff(self.v_indptr))

    @cached_property
    def bitmap(self) -> np.ndarray:
        """Dense transaction x item membership matrix."""
        m = np.zeros((self.transaction_count, self.item_count), dtype=bool)
        rows = np.repeat(np.arange(self.transaction_count), np.diff(self.indptr))
        m[rows, self.items] = True
        return _frozen(m)

    @cached_property
    def item_bitmap(self) -> np.ndarray:
        """Item-major 0/1 matrix: row ``i`` flags the transactions holding ``i``."""
        return _frozen(np.ascontiguousarray(self.bitmap.T, dtype=np.uint8))

    def tid_label(self, tid: int) -> str:
        if self.tid_labels is not None:
            return self.tid_labels[tid]
        return f"T{tid + 1}"

    def labels_of(self, itemset: Iterable[int]) -> list[str]:
        return [self.dictionary.labels[i] for i in itemset]

    def horizontal_labels(self) -> list[frozenset[str]]:
        """Transactions as label sets, independent of id assignment."""
        return [frozenset(self.labels_of(t.items)) for t in self.transactions]


def tid_list(db: TransactionDatabase, item: int) -> np.ndarray:
    """Sorted TIDs of the transactions containing ``item`` (vertical lookup)."""
    return db.tid_list(item)


def _text(data: bytes | str) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def parse_dat(data: bytes | str) -> TransactionDatabase:
    """Parse FIMI ``.dat`` text: one transaction per non-empty line."""
    baskets = []
    for lineno, line in enumerate(_text(data).splitlines(), 1):
        tokens = line.split()
        if not tokens:
            continue
        basket = []
        for tok in tokens:
            if not _INT_TOKEN.fullmatch(tok):
                raise DatasetError(f"line {lineno}: invalid item label {tok!r}")
            basket.append(str(int(tok)))
        baskets.append(basket)
    return TransactionDatabase.from_baskets(baskets)


def parse_basket_csv(data: bytes | str) -> TransactionDatabase:
    """Parse ``tid,item`` rows, grouping by tid in first-appearance order."""
    groups: dict[str, list[str]] = {}
    reader = csv.reader(io.StringIO(_text(data)))
    for rowno, row in enumerate(reader, 1):
        if not row:
            continue
        if len(row) != 2:
            raise DatasetError(f"row {rowno}: expected 2 fields, got {len(row)}")
        if rowno == 1 and row == ["tid", "item"]:
            continue
        tid, item = row
        groups.setdefault(tid, []).append(item)
    return TransactionDatabase.from_baskets(groups.values(), tid_labels=list(groups))


def write_dat(db: TransactionDatabase) -> bytes:
    lines = (" ".join(db.labels_of(t.items)) + "\n" for t in db.transactions)
    return "".join(lines).encode("ascii")


def load(path: str | Path, fmt: str | None = None) -> TransactionDatabase:
    """Load a file; format is taken from the extension when not given."""
    path = Path(path)
    if fmt is None:
        fmt = "csv" if path.suffix.lower() == ".csv" else "dat"
    data = path.read_bytes()
    return parse_basket_csv(data) if fmt == "csv" else parse_dat(data)


def load_table1(fmt: str = "dat") -> TransactionDatabase:
    """The nine-transaction example database bundled with the package."""
    data = resources.files("aprioriscan.data").joinpath(f"table1.{fmt}").read_bytes()
    return parse_basket_csv(data) if fmt == "csv" else parse_dat(data)


def generate_synthetic(
    transaction_count: int,
    item_universe: int,
    mean_basket: float,
    seed: int,
) -> TransactionDatabase:
    """Deterministic random baskets for benchmarking.

    Basket sizes are geometric with mean ``mean_basket``, clamped to
    ``[1, item_universe]``. Items are drawn without replacement with Zipf
    weights ``1/r`` over labels ``1..item_universe`` so low labels are
    common and form frequent itemsets.
    """
    if transaction_count < 0:
        raise DatasetError("transaction_count must be >= 0")
    if item_universe < 1:
        raise DatasetError("item_universe must be >= 1")
    if not 0 < mean_basket <= item_universe:
        raise DatasetError("mean_basket must be in (0, item_universe]")
    rng = np.random.default_rng(seed)
    weights = 1.0 / np.arange(1, item_universe + 1)
    weights /= weights.sum()
    sizes = np.clip(rng.geometric(min(1.0, 1.0 / mean_basket), transaction_count), 1, item_universe)
    baskets = []
    for size in sizes:
        picks = np.sort(rng.choice(item_universe, size=int(size), replace=False, p=weights))
        baskets.append([str(p + 1) for p in picks])
    return TransactionDatabase.from_baskets(baskets)
