"""Brute-force ground truth: scan every phylogenetic tree on the label set."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .tree import PhyloTree, Profile, agrees, contract_edge, displays, sorted_splits

MAX_ORACLE_LABELS = 7


class OracleLimitExceeded(ValueError):
    pass


@dataclass(frozen=True)
class TreeCatalog:
    labels: frozenset
    trees: tuple

    def __len__(self):
        return len(self.trees)

    def __iter__(self):
        return iter(self.trees)

    @property
    def binary(self) -> tuple:
        n = len(self.labels)
        return tuple(t for t in self.trees if len(t.splits) == max(n - 3, 0))


def _insert_leaf(tree: PhyloTree, edge, label: str, new_id: int) -> PhyloTree:
    u, v = edge
    edges = [e for e in tree.edges if e != edge]
    edges += [(u, new_id), (new_id, v), (new_id, label)]
    return PhyloTree(edges)


def binary_trees(labels) -> list:
    """All binary trees on ``labels`` by inserting each label on every edge."""
    labels = sorted(labels)
    if len(labels) <= 3:
        return [PhyloTree.star(labels)]
    trees = [PhyloTree.star(labels[:3])]
    for k, label in enumerate(labels[3:], start=2):
        trees = [_insert_leaf(t, e, label, k) for t in trees for e in sorted(t.edges, key=str)]
    return trees


def _catalog_key(tree: PhyloTree):
    return (len(tree.splits), [s.sort_key() for s in sorted_splits(tree.splits)])


@lru_cache(maxsize=32)
def _catalog(labels: frozenset) -> TreeCatalog:
    seen = {}
    frontier = binary_trees(labels)
    for t in frontier:
        seen[t.splits] = t
    while frontier:
        nxt = []
        for t in frontier:
            for e in t.internal_edges():
                c = contract_edge(t, e)
                if c.splits not in seen:
                    seen[c.splits] = c
                    nxt.append(c)
        frontier = nxt
    trees = sorted(seen.values(), key=_catalog_key)
    return TreeCatalog(labels, tuple(trees))


def enumerate_trees(labels) -> TreeCatalog:
    """Every unrooted phylogenetic tree on ``labels``, one per isomorphism
    class, ordered from least to most resolved."""
    labels = frozenset(labels)
    if not 1 <= len(labels) <= MAX_ORACLE_LABELS:
        raise OracleLimitExceeded(f"oracle handles 1..{MAX_ORACLE_LABELS} labels, got {len(labels)}")
    return _catalog(labels)


def oracle_compatible(profile: Profile) -> PhyloTree | None:
    """First catalog tree displaying every input tree, or None."""
    for s in enumerate_trees(profile.labels):
        if all(displays(s, t) for t in profile.trees):
            return s
    return None


def oracle_agreement(profile: Profile) -> PhyloTree | None:
    """First catalog tree agreeing with every input tree, or None."""
    for s in enumerate_trees(profile.labels):
        if all(agrees(s, t) for t in profile.trees):
            return s
    return None
