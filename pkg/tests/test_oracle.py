import itertools

import pytest

from treecut.oracle import (
    OracleLimitExceeded,
    binary_trees,
    enumerate_trees,
    oracle_agreement,
    oracle_compatible,
)
from treecut.sampling import label_set
from treecut.tree import Split, agrees, displays, splits_compatible


def nontrivial_splits(labels):
    labels = sorted(labels)
    first, rest = labels[0], labels[1:]
    out = []
    for r in range(1, len(rest)):
        for extra in itertools.combinations(rest, r):
            s = Split.of({first, *extra}, set(labels) - {first, *extra})
            if not s.is_trivial:
                out.append(s)
    return out


def count_compatible_sets(splits):
    """Number of pairwise compatible subsets (including the empty one)."""

    def count(pool):
        if not pool:
            return 1
        head, tail = pool[0], pool[1:]
        return count(tail) + count([s for s in tail if splits_compatible(head, s)])

    return count(splits)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_catalog_size_matches_split_sets(n):
    labels = label_set(n)
    assert len(enumerate_trees(labels)) == count_compatible_sets(nontrivial_splits(labels))


@pytest.mark.parametrize("n, count", [(1, 1), (2, 1), (3, 1), (4, 4), (5, 26), (6, 236), (7, 2752)])
def test_catalog_sizes(n, count):
    assert len(enumerate_trees(label_set(n))) == count


@pytest.mark.parametrize("n, count", [(3, 1), (4, 3), (5, 15), (6, 105)])
def test_binary_counts(n, count):
    # (2n-5)!!
    assert len(binary_trees(label_set(n))) == count
    assert len(enumerate_trees(label_set(n)).binary) == count


def test_catalog_distinct():
    cat = enumerate_trees(label_set(6))
    assert len({t.splits for t in cat}) == len(cat)


def test_limit():
    with pytest.raises(OracleLimitExceeded):
        enumerate_trees(label_set(8))


def test_reference_answers(display_only, with_ast):
    s = oracle_compatible(display_only)
    assert s is not None and all(displays(s, t) for t in display_only)
    assert oracle_agreement(display_only) is None
    a = oracle_agreement(with_ast)
    assert a is not None and all(agrees(a, t) for t in with_ast)
