from itertools import combinations

import numpy as np
import pytest
from hypothesis import strategies as st

from aprioriscan import _kernels
from aprioriscan.dataset import TransactionDatabase, load_table1

BACKENDS = ["numpy"] + (["numba"] if _kernels.NUMBA_AVAILABLE else [])


@pytest.fixture
def table1():
    return load_table1("dat")


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def labelled(db, itemset):
    return tuple(sorted(db.labels_of(itemset), key=int))


def db_from_sets(sets):
    return TransactionDatabase.from_baskets([[str(i) for i in sorted(s)] for s in sets])


def random_baskets(rng, max_txns=40, max_items=12):
    n_items = int(rng.integers(1, max_items + 1))
    n_txns = int(rng.integers(0, max_txns + 1))
    density = rng.uniform(0.1, 0.7)
    return [
        [str(i) for i in range(n_items) if rng.random() < density] or [str(int(rng.integers(n_items)))]
        for _ in range(n_txns)
    ]


baskets_strategy = st.lists(
    st.sets(st.integers(0, 11), min_size=1, max_size=8), min_size=0, max_size=40
)


def brute_force_frequent(sets, s):
    """All itemsets with support >= s, by exhaustive subset enumeration."""
    universe = sorted(set().union(*sets)) if sets else []
    out = {}
    for k in range(1, len(universe) + 1):
        found = False
        for combo in combinations(universe, k):
            n = sum(1 for t in sets if set(combo) <= t)
            if n >= s:
                out[frozenset(combo)] = n
                found = True
        if not found:
            break
    return out


def as_label_map(db, result):
    return {frozenset(db.labels_of(r.itemset)): r.support for r in result.records()}


def expected_ledger(db, frequent, s, strategy_kind="f1", prune=False):
    """Scan counts implied by the accounting model, from a set of frequent itemsets.

    Candidates are regenerated here with plain frozensets, independently of
    the package's join implementation.
    """
    m = db.transaction_count
    sup1 = {i: int(n) for i, n in enumerate(db.supports)}
    levels = {}
    for itemset in frequent:
        levels.setdefault(len(itemset), set()).add(frozenset(itemset))
    items = sorted(i for i, n in sup1.items() if n >= s)
    classic = [db.item_count * m]
    filtered = [db.item_count * m]
    k = 2
    prev = {frozenset([i]) for i in items}
    while prev:
        if strategy_kind == "f1":
            cands = {x | {i} for x in prev for i in items if i not in x}
        else:
            cands = set()
            for x in prev:
                for y in prev:
                    xs, ys = sorted(x), sorted(y)
                    if xs[:-1] == ys[:-1] and xs[-1] < ys[-1]:
                        cands.add(x | y)
        if prune:
            cands = {c for c in cands if all(c - {i} in prev for i in c)}
        if not cands:
            break
        classic.append(len(cands) * m)
        filtered.append(sum(min(sup1[i] for i in c) for c in cands))
        prev = levels.get(k, set())
        k += 1
    return classic, filtered


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
        terminalreporter.write_line(line)
