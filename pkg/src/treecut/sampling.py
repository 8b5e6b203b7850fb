"""Seeded random trees and profiles for tests and the self-test."""

from __future__ import annotations

import random
import string

from .tree import PhyloTree, Profile, contract_edge, restrict


def label_set(n: int) -> list:
    if n <= 26:
        return list(string.ascii_lowercase[:n])
    return [f"t{k}" for k in range(n)]


def random_binary_tree(labels, rng: random.Random) -> PhyloTree:
    labels = list(labels)
    rng.shuffle(labels)
    if len(labels) <= 3:
        return PhyloTree.star(labels)
    edges = [(1, x) for x in labels[:3]]
    next_id = 2
    for label in labels[3:]:
        u, v = edges.pop(rng.randrange(len(edges)))
        edges += [(u, next_id), (next_id, v), (next_id, label)]
        next_id += 1
    return PhyloTree(edges)


def random_contraction(tree: PhyloTree, rng: random.Random, p: float) -> PhyloTree:
    """Contract each internal edge independently with probability ``p``."""
    for e in tree.internal_edges():
        if rng.random() < p:
            u, v = e
            if v in tree and u in tree and v in tree.neighbors(u):
                tree = contract_edge(tree, e)
    return tree


def random_tree(labels, rng: random.Random, p_contract: float = 0.0) -> PhyloTree:
    return random_contraction(random_binary_tree(labels, rng), rng, p_contract)


def random_profile(
    rng: random.Random,
    max_labels: int = 6,
    max_trees: int = 3,
    min_labels: int = 4,
    p_contract: float = 0.3,
) -> Profile:
    """
    Mix of profiles drawn from a hidden supertree (restricted, sometimes
    coarsened) and profiles of independent trees, so both answers occur.
    """
    n = rng.randint(min_labels, max_labels)
    labels = label_set(n)
    k = rng.randint(2, max_trees)
    trees = []
    if rng.random() < 0.6:
        base = random_tree(labels, rng, p_contract * rng.random())
        for _ in range(k):
            sub = rng.sample(labels, rng.randint(min(4, n), n))
            t = restrict(base, sub)
            if rng.random() < 0.4:
                t = random_contraction(t, rng, p_contract)
            trees.append(t)
    else:
        for _ in range(k):
            sub = rng.sample(labels, rng.randint(min(4, n), n))
            trees.append(random_tree(sub, rng, p_contract * rng.random()))
    return Profile(tuple(trees))
