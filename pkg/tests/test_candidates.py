from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aprioriscan.candidates import (
    CandidateSet,
    JoinKind,
    JoinStrategy,
    DEFAULT_STRATEGY,
    has_infrequent_subset,
    join,
)

L2 = [(1, 2), (1, 3), (2, 3), (2, 4)]
ITEMS = [1, 2, 3, 4]
CLASSIC = JoinStrategy(JoinKind.CLASSIC_SELF_JOIN, prune=False)
CLASSIC_PRUNE = JoinStrategy(JoinKind.CLASSIC_SELF_JOIN, prune=True)


def extensions_by_enumeration(prev, items, k):
    # every k-subset of the items that contains some member of prev
    prev_sets = [set(x) for x in prev]
    return {c for c in combinations(sorted(items), k) if any(p <= set(c) for p in prev_sets)}


def test_f1_extend_third_level():
    cands = join(L2, ITEMS, DEFAULT_STRATEGY)
    assert set(cands) == extensions_by_enumeration(L2, ITEMS, 3)
    assert cands.itemsets == ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4))
    assert cands.size_k == 3


def test_classic_join_with_prune():
    assert join(L2, ITEMS, CLASSIC).itemsets == ((1, 2, 3), (2, 3, 4))
    assert join(L2, ITEMS, CLASSIC_PRUNE).itemsets == ((1, 2, 3),)


def test_empty_join():
    cands = join([], ITEMS, DEFAULT_STRATEGY, k=3)
    assert len(cands) == 0 and cands.size_k == 3
    assert cands.as_array().shape == (0, 3)


def test_level_two_from_singletons():
    cands = join([(0,), (2,), (5,)], [0, 2, 5])
    assert cands.itemsets == ((0, 2), (0, 5), (2, 5))
    assert join([(0,), (2,), (5,)], [0, 2, 5], CLASSIC).itemsets == cands.itemsets


def test_mixed_sizes_rejected():
    with pytest.raises(ValueError, match="mixed"):
        join([(1,), (1, 2)], ITEMS)


def test_non_canonical_rejected():
    with pytest.raises(ValueError):
        join([(2, 1)], ITEMS)


def test_has_infrequent_subset_examples():
    prev = set(L2)
    assert has_infrequent_subset((2, 3, 4), prev)
    assert not has_infrequent_subset((1, 2, 3), prev)
    assert not has_infrequent_subset((1, 4), {(1,), (4,)})


def test_as_array_layout():
    arr = CandidateSet(2, ((0, 1), (1, 3))).as_array()
    assert arr.dtype.name == "int64" and arr.flags.c_contiguous
    assert arr.tolist() == [[0, 1], [1, 3]]


@st.composite
def levels(draw):
    k = draw(st.integers(1, 4))
    universe = list(range(draw(st.integers(k, 9))))
    prev = draw(st.sets(st.sampled_from(list(combinations(universe, k))), max_size=25))
    items = sorted({i for x in prev for i in x})
    return sorted(prev), items


@settings(max_examples=200, deadline=None)
@given(levels())
def test_f1_superset_of_self_join(level):
    prev, items = level
    f1 = set(join(prev, items, DEFAULT_STRATEGY))
    assert set(join(prev, items, CLASSIC)) <= f1
    if prev:
        assert f1 == extensions_by_enumeration(prev, items, len(prev[0]) + 1)


@settings(max_examples=200, deadline=None)
@given(levels())
def test_pruned_candidates_have_frequent_subsets(level):
    prev, items = level
    prev_set = set(prev)
    for strategy in (CLASSIC_PRUNE, JoinStrategy(JoinKind.F1_EXTEND, prune=True)):
        for c in join(prev, items, strategy):
            assert not has_infrequent_subset(c, prev_set)


@settings(max_examples=200, deadline=None)
@given(levels(), st.sampled_from([DEFAULT_STRATEGY, CLASSIC, CLASSIC_PRUNE]))
def test_output_is_canonical(level, strategy):
    prev, items = level
    cands = join(prev, items, strategy)
    its = cands.itemsets
    assert list(its) == sorted(set(its))
    assert all(len(c) == cands.size_k and list(c) == sorted(set(c)) for c in its)
    assert join(list(reversed(prev)), items, strategy) == cands
