"""
Acceptance gate.  Each test prints one PASS/FAIL line for its criterion.

Corpora are seeded so runs are reproducible.
"""

import itertools
import random
import time

import pytest

from treecut.cuts import (
    cuts_parallel,
    is_legal_cut,
    is_minimal_cut,
    is_nice_cut,
    legal_minimal_cuts,
    sigma_of_cut,
)
from treecut.display import build_display_graph
from treecut.elig import build_elig, legal_minimal_separators, separators_parallel
from treecut.oracle import enumerate_trees, oracle_agreement, oracle_compatible
from treecut.sampling import label_set, random_profile, random_tree
from treecut.selftest import (
    DISPLAY_ONLY_CUTS,
    DISPLAY_ONLY_SPLITS,
    agreement_profile,
    display_only_profile,
    named_cuts,
)
from treecut.solver import (
    AGREEMENT,
    agreement_cut_function,
    decide_agreement,
    decide_compatibility,
    minimize_cut_function,
    requirements_of,
    serves,
    verify_witness,
)
from treecut.tree import (
    Profile,
    Split,
    agrees,
    displays,
    parse_newick,
    serialize_newick,
    splits_compatible,
    splits_of,
    tree_from_splits,
    trees_isomorphic,
)

from conftest import nonminimal_ast_instances

SEED = 20240601
RANDOM_PROFILES = 500
SEPARATOR_PROFILES = 120
PARALLEL_PROFILES = 150
ROUNDTRIP_TREES = 1000
FIXPOINT_INSTANCES = 24


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance {number}] {'PASS' if ok else 'FAIL'}: {detail}")

    return emit


def exhaustive_pairs():
    """Every unordered pair (with repetition) of trees on subsets of a..e
    with at least three labels."""
    pool = []
    for r in range(3, 6):
        for sub in itertools.combinations(label_set(5), r):
            pool += enumerate_trees(sub).trees
    return [Profile((a, b)) for a, b in itertools.combinations_with_replacement(pool, 2)]


def random_corpus(n, seed, max_labels=6, max_trees=3):
    rng = random.Random(seed)
    return [random_profile(rng, max_labels=max_labels, max_trees=max_trees) for _ in range(n)]


# witnesses from criteria 2 and 3, reused by 5 and 6
WITNESSES: list = []


def witnesses():
    """Witnesses collected so far, or a fresh pool when run in isolation."""
    if not WITNESSES:
        for p in [display_only_profile(), agreement_profile()] + random_corpus(RANDOM_PROFILES, SEED):
            for decide in (decide_compatibility, decide_agreement):
                w = decide(p)
                if w is not None:
                    WITNESSES.append((p, w))
    return WITNESSES


def test_criterion_1_reference_family(report):
    start = time.perf_counter()
    p = display_only_profile()
    g = build_display_graph(p)
    cuts = named_cuts(g, DISPLAY_ONLY_CUTS)
    checks = {
        "size": (len(g.vertices), len(g.edges)) == (14, 18),
        "legal": all(is_legal_cut(g, c) for c in cuts),
        "nice": all(is_nice_cut(g, c) for c in cuts),
        "minimal": all(is_minimal_cut(g, c.edges) for c in cuts),
        "parallel": all(cuts_parallel(g, a, b) for a, b in itertools.combinations(cuts, 2)),
        "complete": all(any(serves(c, r) for c in cuts) for r in requirements_of(g)),
        "splits": [sigma_of_cut(g, c) for c in cuts] == [Split.parse(s) for s in DISPLAY_ONLY_SPLITS],
    }
    elapsed = time.perf_counter() - start
    ok = all(checks.values()) and elapsed < 1.0
    failed = [k for k, v in checks.items() if not v]
    report(1, ok, f"reference graph/cut family, failed={failed}, {elapsed:.3f}s (< 1 s)")
    assert ok


def test_criterion_2_reference_decisions(report):
    start = time.perf_counter()
    p1, p2 = display_only_profile(), agreement_profile()
    compat = decide_compatibility(p1)
    no_ast = decide_agreement(p1)
    ast = decide_agreement(p2)
    elapsed = time.perf_counter() - start
    ok = (
        compat is not None
        and verify_witness(p1, compat)
        and no_ast is None
        and ast is not None
        and verify_witness(p2, ast)
        and all(agrees(ast.supertree, t) for t in p2)
        and elapsed < 1.0
    )
    WITNESSES.extend([(p1, compat), (p2, ast)])
    report(
        2,
        ok,
        f"compat=YES agree=NO on first pair, agree=YES on second "
        f"({serialize_newick(ast.supertree) if ast else None}), {elapsed:.3f}s (< 1 s)",
    )
    assert ok


def test_criterion_3_oracle_equivalence(report):
    start = time.perf_counter()
    exhaustive = exhaustive_pairs()
    corpus = exhaustive + random_corpus(RANDOM_PROFILES, SEED)
    mismatches = []
    for p in corpus:
        for decide, oracle in ((decide_compatibility, oracle_compatible), (decide_agreement, oracle_agreement)):
            w = decide(p)
            if (w is None) != (oracle(p) is None):
                mismatches.append((decide.__name__, p.newick()))
            elif w is not None:
                WITNESSES.append((p, w))
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 300
    report(
        3,
        ok,
        f"{len(exhaustive)} exhaustive + {RANDOM_PROFILES} random profiles, "
        f"{len(mismatches)} mismatches, {elapsed:.1f}s (target < 300 s)",
    )
    assert not mismatches, mismatches[:5]


def test_criterion_4_separators_are_nice_cuts(report):
    mismatches = 0
    parallel_pairs = 0
    checked = 0
    for p in random_corpus(SEPARATOR_PROFILES, SEED + 4):
        g = build_display_graph(p)
        for comp in g.component_graphs():
            checked += 1
            elig = build_elig(comp)
            seps = set(legal_minimal_separators(elig))
            nice = {c.edges: c for c in legal_minimal_cuts(comp) if is_nice_cut(comp, c)}
            if seps != set(nice):
                mismatches += 1
                continue
            for a, b in itertools.combinations(sorted(seps, key=sorted_key), 2):
                parallel_pairs += 1
                if separators_parallel(elig, a, b) != cuts_parallel(comp, nice[a], nice[b]):
                    mismatches += 1
    ok = mismatches == 0
    report(4, ok, f"{checked} display graphs, {parallel_pairs} parallelism pairs, {mismatches} mismatches")
    assert ok


def sorted_key(edges):
    return sorted(str(e) for e in edges)


def test_criterion_5_supertree_from_splits(report):
    pool = witnesses()
    failures = 0
    for p, w in pool:
        s = tree_from_splits(w.splits, p.labels)
        rel = agrees if w.mode == AGREEMENT else displays
        if not all(rel(s, t) for t in p):
            failures += 1
    ok = failures == 0
    report(5, ok, f"{len(pool)} witnesses, {failures} failures")
    assert ok


def test_criterion_6_parallel_cuts_compatible_splits(report):
    failures = 0
    pairs = 0
    graphs = 0
    corpus = [display_only_profile(), agreement_profile()] + random_corpus(PARALLEL_PROFILES, SEED + 6)
    for p in corpus:
        for comp in build_display_graph(p).component_graphs():
            graphs += 1
            nice = [c for c in legal_minimal_cuts(comp) if is_nice_cut(comp, c)]
            sigma = {c: sigma_of_cut(comp, c) for c in nice}
            for a, b in itertools.combinations(nice, 2):
                if cuts_parallel(comp, a, b):
                    pairs += 1
                    if not splits_compatible(sigma[a], sigma[b]):
                        failures += 1
    # the families actually chosen by the solver
    for p, w in witnesses():
        for a, b in itertools.combinations(sorted(w.splits, key=Split.sort_key), 2):
            pairs += 1
            if not splits_compatible(a, b):
                failures += 1
    ok = failures == 0
    report(6, ok, f"{graphs} graphs, {pairs} parallel pairs, {failures} incompatible")
    assert ok


def test_criterion_7_roundtrip(report):
    start = time.perf_counter()
    rng = random.Random(SEED + 7)
    failures = 0
    for _ in range(ROUNDTRIP_TREES):
        n = rng.randint(3, 12)
        t = random_tree(label_set(n), rng, rng.choice([0.0, 0.2, 0.5]))
        if not trees_isomorphic(tree_from_splits(splits_of(t), t.labels), t):
            failures += 1
        if parse_newick(serialize_newick(t)).splits != t.splits:
            failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 30
    report(7, ok, f"{ROUNDTRIP_TREES} trees, {failures} failures, {elapsed:.2f}s (< 30 s)")
    assert ok


def test_criterion_8_edge_splitting_fixpoint(report):
    instances = nonminimal_ast_instances(random.Random(SEED + 8), FIXPOINT_INSTANCES)
    failures = 0
    for s, p in instances:
        g = build_display_graph(p)
        try:
            out = minimize_cut_function(s, p)
        except RuntimeError:
            failures += 1
            continue
        if not all(agrees(out, t) for t in p):
            failures += 1
            continue
        psi = agreement_cut_function(out, p)
        if not all(is_minimal_cut(g, f) for f in psi.values()):
            failures += 1
    ok = failures == 0 and len(instances) >= 20
    report(8, ok, f"{len(instances)} constructed ASTs with non-minimal cut function, {failures} failures")
    assert ok
