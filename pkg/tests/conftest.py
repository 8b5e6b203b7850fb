import random

import pytest
from hypothesis import strategies as st

from treecut.sampling import label_set, random_profile, random_tree
from treecut.selftest import agreement_profile, display_only_profile


@pytest.fixture
def display_only():
    return display_only_profile()


@pytest.fixture
def with_ast():
    return agreement_profile()


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def trees(draw, min_leaves=3, max_leaves=10):
    n = draw(st.integers(min_leaves, max_leaves))
    p = draw(st.sampled_from([0.0, 0.3, 0.7]))
    return random_tree(label_set(n), random.Random(draw(seeds)), p)


@st.composite
def profiles(draw, max_labels=6, max_trees=3):
    return random_profile(random.Random(draw(seeds)), max_labels=max_labels, max_trees=max_trees)


def leaf_is_cut_vertex(g, x):
    return len(g.components(g.incident_edges(x))) > 2


def nonminimal_ast_instances(rng, count, max_tries=5000):
    """
    (supertree, profile) pairs where the supertree is an AST of a connected
    profile of its restrictions, some edge's cut-function value is not a
    minimal cut, and no leaf is a cut vertex of the display graph (so every
    pendant edge maps to a minimal cut).
    """
    from treecut.cuts import is_minimal_cut
    from treecut.display import build_display_graph
    from treecut.sampling import random_binary_tree
    from treecut.solver import agreement_cut_function
    from treecut.tree import Profile, restrict

    out = []
    for _ in range(max_tries):
        if len(out) >= count:
            break
        n = rng.randint(5, 8)
        labels = label_set(n)
        s = random_binary_tree(labels, rng)
        trees = tuple(restrict(s, rng.sample(labels, rng.randint(4, n))) for _ in range(rng.randint(2, 3)))
        p = Profile(trees)
        if p.labels != frozenset(labels):
            continue
        g = build_display_graph(p)
        if not g.is_connected() or any(leaf_is_cut_vertex(g, x) for x in labels):
            continue
        psi = agreement_cut_function(s, p)
        if all(is_minimal_cut(g, f) for f in psi.values()):
            continue
        out.append((s, p))
    return out
