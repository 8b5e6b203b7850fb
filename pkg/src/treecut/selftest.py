"""Worked reference instances and a quick end-to-end self check."""

from __future__ import annotations

import random
import time

from .cuts import cuts_parallel, is_legal_cut, is_minimal_cut, is_nice_cut, make_cut, sigma_of_cut
from .display import build_display_graph
from .oracle import oracle_agreement, oracle_compatible
from .sampling import random_profile
from .solver import (
    AGREEMENT,
    COMPATIBILITY,
    decide_agreement,
    decide_compatibility,
    requirements_of,
    serves,
    verify_witness,
    witness_from_cuts,
)
from .tree import Profile, Split, agrees

# Compatible pair without an agreement supertree.  Internal vertices come
# out as 1-3 (first tree) and 4-7 (second tree).
DISPLAY_ONLY_TREES = ("(a,b,c,(f,(d,e)));", "(a,b,(c,(d,e,(f,g))));")
DISPLAY_ONLY_CUTS = (("1-2", "5-6"), ("2-3", "6-7", "5-6"), ("4-5", "1-2", "1-c"), ("6-7", "2-f"))
DISPLAY_ONLY_SPLITS = ("abc|defg", "abcfg|de", "ab|cdefg", "abcde|fg")

# Pair with an agreement supertree; internals 1-3 and 4-6.
AGREEMENT_TREES = ("(a,b,(c,(d,e)));", "(a,b,(f,(c,d)));")
AGREEMENT_CUTS = (("1-2", "4-5"), ("1-2", "5-6"), ("2-3", "6-d"))
AGREEMENT_SUPERTREE = "((a,b),f,(c,(d,e)));"


def display_only_profile() -> Profile:
    return Profile.from_newick(DISPLAY_ONLY_TREES)


def agreement_profile() -> Profile:
    return Profile.from_newick(AGREEMENT_TREES)


def named_cuts(g, family):
    return [make_cut(g, [g.parse_edge(x) for x in names]) for names in family]


def check_reference_family() -> list:
    """(name, ok) pairs for the worked cut family of the display-only pair."""
    p = display_only_profile()
    g = build_display_graph(p)
    cuts = named_cuts(g, DISPLAY_ONLY_CUTS)
    reqs = requirements_of(g)
    return [
        ("graph size 14/18", (len(g.vertices), len(g.edges)) == (14, 18)),
        ("cuts minimal", all(is_minimal_cut(g, c.edges) for c in cuts)),
        ("cuts legal", all(is_legal_cut(g, c) for c in cuts)),
        ("cuts nice", all(is_nice_cut(g, c) for c in cuts)),
        ("cuts pairwise parallel", all(cuts_parallel(g, a, b) for a in cuts for b in cuts)),
        ("family complete", all(any(serves(c, r) for c in cuts) for r in reqs)),
        (
            "induced splits",
            [sigma_of_cut(g, c) for c in cuts] == [Split.parse(s) for s in DISPLAY_ONLY_SPLITS],
        ),
    ]


def check_reference_decisions() -> list:
    p1, p2 = display_only_profile(), agreement_profile()
    w_compat = decide_compatibility(p1)
    w_agree = decide_agreement(p2)
    hinted = witness_from_cuts(p2, [[build_display_graph(p2).parse_edge(x) for x in f] for f in AGREEMENT_CUTS], AGREEMENT)
    return [
        ("display-only pair compatible", w_compat is not None and verify_witness(p1, w_compat)),
        ("display-only pair has no AST", decide_agreement(p1) is None),
        ("agreement pair has an AST", w_agree is not None and verify_witness(p2, w_agree)),
        ("AST agrees with inputs", w_agree is not None and all(agrees(w_agree.supertree, t) for t in p2)),
        ("worked agreement family valid", hinted is not None and verify_witness(p2, hinted)),
    ]


def check_random(seed: int = 0, count: int = 50) -> list:
    rng = random.Random(seed)
    mismatches = 0
    for _ in range(count):
        p = random_profile(rng, max_labels=6, max_trees=3)
        for decide, oracle in ((decide_compatibility, oracle_compatible), (decide_agreement, oracle_agreement)):
            w = decide(p)
            if (w is None) != (oracle(p) is None) or (w is not None and not verify_witness(p, w)):
                mismatches += 1
    return [(f"{count} random profiles match the oracle (seed {seed})", mismatches == 0)]


def run(seed: int = 0, count: int = 50, out=print) -> bool:
    start = time.perf_counter()
    results = check_reference_family() + check_reference_decisions() + check_random(seed, count)
    for name, ok in results:
        out(f"{'PASS' if ok else 'FAIL'}  {name}")
    out(f"{sum(ok for _, ok in results)}/{len(results)} passed in {time.perf_counter() - start:.2f}s")
    return all(ok for _, ok in results)


__all__ = [
    "AGREEMENT",
    "COMPATIBILITY",
    "DISPLAY_ONLY_TREES",
    "DISPLAY_ONLY_CUTS",
    "DISPLAY_ONLY_SPLITS",
    "AGREEMENT_TREES",
    "AGREEMENT_CUTS",
    "AGREEMENT_SUPERTREE",
    "display_only_profile",
    "agreement_profile",
    "named_cuts",
    "run",
]
