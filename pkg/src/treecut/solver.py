"""
Compatibility and agreement decisions by searching for a complete family of
pairwise parallel legal minimal cuts in the display graph.

Modes
-----
``"compatibility"``  a supertree must display every input tree.
``"agreement"``      a supertree must agree with every input tree; cuts may
                     hold at most one edge of each tree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .cuts import (
    Cut,
    DisconnectedGraphError,
    NotACutError,
    cuts_parallel,
    enumerate_minimal_cuts,
    is_legal_cut,
    is_minimal_cut,
    is_nice_cut,
    make_cut,
    max_edges_per_tree,
    sigma_of_cut,
    sort_cuts,
)
from .display import DisplayGraph, build_display_graph, edge_name
from .tree import (
    PhyloTree,
    Profile,
    Split,
    agrees,
    displays,
    edge_key,
    make_edge,
    restrict,
    serialize_newick,
    sorted_splits,
    tree_from_splits,
    trees_isomorphic,
    vkey,
)

COMPATIBILITY = "compatibility"
AGREEMENT = "agreement"
MODES = (COMPATIBILITY, AGREEMENT)
DEFAULT_LIMIT = 26
SCHEMA_VERSION = 1


@dataclass(frozen=True, order=True)
class Requirement:
    """Internal edge ``edge`` (display-graph ids) of input tree ``tree_index``."""

    tree_index: int
    edge: tuple

    def __str__(self):
        return f"T{self.tree_index}:{edge_name(self.edge)}"


@dataclass(frozen=True)
class Witness:
    """
    A complete family of pairwise parallel legal minimal cuts together with
    the splits it induces and the supertree built from them.

    For a profile with a disconnected display graph the cuts of every
    component are pooled; ``splits`` then holds splits of each component's
    label set and ``supertree`` joins the component supertrees.
    """

    mode: str
    cuts: tuple
    splits: frozenset
    supertree: PhyloTree

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "mode": self.mode,
            "cuts": [c.edge_names() for c in self.cuts],
            "splits": [[sorted(s.side_a), sorted(s.side_b)] for s in sorted_splits(self.splits)],
            "supertree": serialize_newick(self.supertree),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


# ---------------------------------------------------------------------------
# Requirements and candidates
# ---------------------------------------------------------------------------


def requirements_of(profile_or_graph) -> list:
    """One requirement per internal edge of every tree (in display-graph ids)."""
    g = profile_or_graph
    if isinstance(g, Profile):
        g = build_display_graph(g)
    out = []
    for i in g.tree_indices:
        for e in g.internal_edges_of(i):
            out.append(Requirement(i, e))
    return out


def serves(cut, req: Requirement) -> bool:
    """``req.edge`` is the only edge of its tree in ``cut``."""
    return cut.per_tree.get(req.tree_index) == frozenset((req.edge,))


def admissible(g: DisplayGraph, cut: Cut, mode: str) -> bool:
    if mode == AGREEMENT:
        return max_edges_per_tree(g, cut) <= 1
    return is_legal_cut(g, cut)


def candidate_cuts(g: DisplayGraph, requirement: Requirement, mode: str = COMPATIBILITY, cuts=None) -> list:
    """Legal minimal cuts serving ``requirement``; in agreement mode also at
    most one edge per tree."""
    _check_mode(mode)
    if cuts is None:
        cuts = enumerate_minimal_cuts(g)
    return [c for c in cuts if serves(c, requirement) and admissible(g, c, mode)]


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------


def search_family(requirements, candidates: dict, parallel) -> list | None:
    """
    Backtracking search for a pairwise parallel family covering every
    requirement.

    ``candidates`` maps each requirement to an ordered list of items;
    ``parallel(x, y)`` is the compatibility predicate.  The uncovered
    requirement with fewest remaining options is branched on first, and an
    item chosen for one requirement may cover others.  Returns the chosen
    items in selection order, or None.
    """
    items: list = []
    pos: dict = {}
    for r in requirements:
        for x in candidates[r]:
            if x not in pos:
                pos[x] = len(items)
                items.append(x)
    n = len(items)
    compat = [0] * n
    for i in range(n):
        compat[i] |= 1 << i
        for j in range(i + 1, n):
            if parallel(items[i], items[j]):
                compat[i] |= 1 << j
                compat[j] |= 1 << i
    cand_mask = {}
    for r in requirements:
        m = 0
        for x in candidates[r]:
            m |= 1 << pos[x]
        cand_mask[r] = m
    order = list(requirements)
    chosen: list = []

    def bits(m):
        while m:
            b = m & -m
            yield b.bit_length() - 1
            m ^= b

    def step(allowed: int, chosen_mask: int) -> bool:
        best = None
        best_opts = 0
        best_count = None
        for r in order:
            if cand_mask[r] & chosen_mask:
                continue
            opts = cand_mask[r] & allowed
            count = bin(opts).count("1")
            if count == 0:
                return False
            if best_count is None or count < best_count:
                best, best_opts, best_count = r, opts, count
        if best is None:
            return True
        for k in bits(best_opts):
            chosen.append(items[k])
            if step(allowed & compat[k], chosen_mask | (1 << k)):
                return True
            chosen.pop()
        return False

    if step((1 << n) - 1, 0):
        return chosen
    return None


def minimal_complete_subfamily(requirements, cuts) -> list:
    """Drop cuts (last first) while the family stays complete.

    Every cut left serves some requirement alone, so each is nice."""
    family = list(cuts)
    for c in reversed(list(family)):
        trial = [x for x in family if x is not c]
        if all(any(serves(x, r) for x in trial) for r in requirements):
            family = trial
    return family


def _join(trees: list) -> PhyloTree:
    """Join trees on disjoint label sets into one tree; restricting the
    result to any part's labels gives that part back."""
    result = trees[0]
    for other in trees[1:]:
        result = _join_two(result, other)
    return result.relabel_internal()


def _join_two(s1: PhyloTree, s2: PhyloTree) -> PhyloTree:
    edges = []
    next_id = 1

    def attach(tree):
        # returns (edge list with fresh ids, vertex to hang the other tree on)
        nonlocal next_id
        if len(tree.labels) == 1:
            return [], next(iter(tree.labels))
        base = next_id
        ids = {v: base + k for k, v in enumerate(tree.internal_vertices)}
        next_id = base + len(ids) + 1
        hub = base + len(ids)
        ren = lambda x: ids[x] if isinstance(x, int) else x
        least = min(tree.labels)
        out = []
        pendant = make_edge(least, next(iter(tree.neighbors(least))))
        for u, v in tree.edges:
            if (u, v) == pendant:
                out += [(ren(u), hub), (hub, ren(v))]
            else:
                out.append((ren(u), ren(v)))
        return out, hub

    e1, h1 = attach(s1)
    e2, h2 = attach(s2)
    edges = e1 + e2 + [(h1, h2)]
    return PhyloTree(edges)


def _solve_component(g: DisplayGraph, mode: str, limit: int | None):
    """(chosen cuts, splits, supertree) for one connected component, or None."""
    reqs = requirements_of(g)
    labels = g.labels
    if not reqs:
        return [], frozenset(), tree_from_splits((), labels)
    cuts = enumerate_minimal_cuts(g, limit)
    legal = [c for c in cuts if admissible(g, c, mode)]
    candidates = {r: [c for c in legal if serves(c, r)] for r in reqs}
    index = {c: k for k, c in enumerate(legal)}
    matrix: dict = {}

    def parallel(x, y):
        key = (index[x], index[y]) if index[x] < index[y] else (index[y], index[x])
        if key not in matrix:
            matrix[key] = cuts_parallel(g, x, y)
        return matrix[key]

    family = search_family(reqs, candidates, parallel)
    if family is None:
        return None
    family = sort_cuts(minimal_complete_subfamily(reqs, sort_cuts(family)))
    splits = frozenset(s for s in (sigma_of_cut(g, c) for c in family) if not s.is_trivial)
    return family, splits, tree_from_splits(splits, labels)


def _decide(profile: Profile, mode: str, limit: int | None, hint=None) -> Witness | None:
    _check_mode(mode)
    if not isinstance(profile, Profile):
        profile = Profile(tuple(profile))
    g = build_display_graph(profile)
    if hint is not None:
        w = witness_from_cuts(profile, hint, mode)
        if w is not None:
            return w
    parts = []
    all_cuts: list = []
    all_splits: set = set()
    for comp in g.component_graphs():
        found = _solve_component(comp, mode, limit)
        if found is None:
            return None
        family, splits, tree = found
        all_cuts += family
        all_splits |= splits
        parts.append(tree)
    supertree = parts[0] if len(parts) == 1 else _join(parts)
    witness = Witness(mode, tuple(sort_cuts(all_cuts)), frozenset(all_splits), supertree)
    check = agrees if mode == AGREEMENT else displays
    for t in profile.trees:
        # guaranteed by the characterization; a failure here is a bug
        assert check(supertree, t), f"synthesized supertree fails {mode} with {t}"
    return witness


def decide_compatibility(profile, limit: int | None = DEFAULT_LIMIT, hint=None) -> Witness | None:
    """
    Witness that ``profile`` is compatible, or None if it is not.

    ``hint`` may be a family of edge sets; if it is a valid complete family
    it is used directly instead of searching.  Raises
    :class:`~treecut.cuts.ResourceLimitExceeded` when a component of the
    display graph has more than ``limit`` vertices.
    """
    return _decide(profile, COMPATIBILITY, limit, hint)


def decide_agreement(profile, limit: int | None = DEFAULT_LIMIT, hint=None) -> Witness | None:
    """Witness that ``profile`` has an agreement supertree, or None."""
    return _decide(profile, AGREEMENT, limit, hint)


def witness_from_cuts(profile: Profile, cut_edges: Iterable, mode: str = COMPATIBILITY) -> Witness | None:
    """Build a witness from a user-supplied family of edge sets, or None if
    the family is not a valid complete family for ``mode``."""
    g = build_display_graph(profile)
    comps = g.component_graphs()
    cuts = []
    for edges in cut_edges:
        edges = frozenset(make_edge(*e) for e in edges)
        home = [c for c in comps if all(e in c.edge_tree for e in edges)]
        if len(home) != 1:
            return None
        try:
            cuts.append((home[0], make_cut(home[0], edges)))
        except NotACutError:
            return None
    all_cuts = []
    splits: set = set()
    parts = []
    for comp in comps:
        mine = [c for h, c in cuts if h is comp]
        reqs = requirements_of(comp)
        if not all(admissible(comp, c, mode) for c in mine):
            return None
        if not all(any(serves(c, r) for c in mine) for r in reqs):
            return None
        if not all(cuts_parallel(comp, a, b) for k, a in enumerate(mine) for b in mine[k + 1 :]):
            return None
        mine = sort_cuts(minimal_complete_subfamily(reqs, mine))
        comp_splits = frozenset(s for s in (sigma_of_cut(comp, c) for c in mine) if not s.is_trivial)
        all_cuts += mine
        splits |= comp_splits
        parts.append(tree_from_splits(comp_splits, comp.labels))
    supertree = parts[0] if len(parts) == 1 else _join(parts)
    return Witness(mode, tuple(sort_cuts(all_cuts)), frozenset(splits), supertree)


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def witness_problems(profile: Profile, witness: Witness) -> list:
    """
    Re-check every witness invariant from the raw edge sets.

    Returns a list of ``"<category>: <detail>"`` strings; empty means valid.
    Categories: mode, cut, minimality, legality, agreement-bound,
    parallelism, completeness, splits, supertree, display, agree.
    """
    problems = []
    if witness.mode not in MODES:
        return [f"mode: unknown mode {witness.mode!r}"]
    g = build_display_graph(profile)
    comps = g.component_graphs()
    by_comp: dict = {id(c): [] for c in comps}
    for cut in witness.cuts:
        edges = {make_edge(*e) for e in cut.edges}
        home = [c for c in comps if edges and all(e in c.edge_tree for e in edges)]
        if len(home) != 1:
            problems.append(f"cut: {cut} is not an edge set of one component")
            continue
        comp = home[0]
        if not is_minimal_cut(comp, edges):
            problems.append(f"minimality: {cut} is not a minimal cut")
            continue
        per_tree: dict = {}
        for e in edges:
            per_tree.setdefault(comp.edge_tree[e], set()).add(e)
        for i, es in per_tree.items():
            shared = set.intersection(*(set(e) for e in es))
            if not shared:
                problems.append(f"legality: {cut} holds non-adjacent edges of tree {i}")
            if witness.mode == AGREEMENT and len(es) > 1:
                problems.append(f"agreement-bound: {cut} holds {len(es)} edges of tree {i}")
        by_comp[id(comp)].append((cut, frozenset(edges), per_tree))

    comp_splits: dict = {}
    for comp in comps:
        members = by_comp[id(comp)]
        for k, (c1, e1, _) in enumerate(members):
            sides1 = comp.components(e1)
            for c2, e2, _ in members[k + 1 :]:
                sides2 = comp.components(e2)
                hit1 = [s for s in sides1 if any(u in s and v in s for u, v in e2 - e1)]
                hit2 = [s for s in sides2 if any(u in s and v in s for u, v in e1 - e2)]
                if len(hit1) > 1 or len(hit2) > 1:
                    problems.append(f"parallelism: {c1} and {c2} are not parallel")
        for i in comp.tree_indices:
            tree = profile.trees[i]
            for e in tree.internal_edges():
                de = comp.edge_of(i, e)
                if not any(pt.get(i) == {de} for _, _, pt in members):
                    problems.append(f"completeness: no cut serves edge {edge_name(de)} of tree {i}")
        splits = set()
        for cut, edges, _ in members:
            sides = comp.components(edges)
            if len(sides) == 2 and all(len(s) >= 2 for s in sides):
                a = {v for v in sides[0] if isinstance(v, str)}
                b = {v for v in sides[1] if isinstance(v, str)}
                if a and b and (len(a) > 1 and len(b) > 1):
                    splits.add(Split.of(a, b))
        comp_splits[id(comp)] = (comp, frozenset(splits))

    expected = frozenset().union(*(s for _, s in comp_splits.values()))
    if expected != frozenset(witness.splits):
        problems.append("splits: stored splits differ from those induced by the cuts")
    tree = witness.supertree
    if tree.labels != profile.labels:
        problems.append("supertree: label set differs from the profile's")
        return problems
    for comp, splits in comp_splits.values():
        try:
            built = tree_from_splits(splits, comp.labels)
        except ValueError as exc:
            problems.append(f"splits: {exc}")
            continue
        if not trees_isomorphic(restrict(tree, comp.labels), built):
            problems.append("supertree: not the tree of the induced splits")
    check, word = (agrees, "agree") if witness.mode == AGREEMENT else (displays, "display")
    for i, t in enumerate(profile.trees):
        if not check(tree, t):
            problems.append(f"{word}: supertree fails to {word} with tree {i}")
    return problems


def verify_witness(profile: Profile, witness: Witness) -> bool:
    return not witness_problems(profile, witness)


# ---------------------------------------------------------------------------
# Cut function of an agreement supertree and edge splitting
# ---------------------------------------------------------------------------


def _tree_edge_sides(tree: PhyloTree) -> dict:
    """Map ``frozenset({side, other side})`` -> edge for every edge of ``tree``."""
    out = {}
    for e in tree.edges:
        a, b = tree.edge_split(e)
        out[frozenset((a, b))] = e
    return out


def agreement_cut_function(supertree: PhyloTree, profile: Profile) -> dict:
    """
    For each supertree edge ``e``, the display-graph edges ``f`` for which
    ``e`` is the agreement edge: ``f`` lies in a tree spanning both sides of
    ``e`` and induces the same bipartition of that tree's labels.

    Values are frozensets of edges; they are cuts of the display graph but
    need not be minimal.
    """
    for i, t in enumerate(profile.trees):
        if not agrees(supertree, t):
            raise ValueError(f"supertree does not agree with tree {i}")
    g = build_display_graph(profile)
    sides = [_tree_edge_sides(t) for t in profile.trees]
    psi = {}
    for e in sorted(supertree.edges, key=edge_key):
        lu, lv = supertree.edge_split(e)
        found = set()
        for i, t in enumerate(profile.trees):
            a, b = lu & t.labels, lv & t.labels
            if a and b:
                f = sides[i][frozenset((a, b))]
                found.add(g.edge_of(i, f))
        psi[e] = frozenset(found)
    return psi


def cut_function_is_minimal(supertree: PhyloTree, profile: Profile, internal_only: bool = False) -> bool:
    g = build_display_graph(profile)
    psi = agreement_cut_function(supertree, profile)
    for e, f in psi.items():
        if internal_only and not (isinstance(e[0], int) and isinstance(e[1], int)):
            continue
        if not is_minimal_cut(g, f):
            return False
    return True


def _far_partition(supertree, edge, endpoint, profile, g=None, psi=None):
    u = endpoint
    if u not in edge:
        raise ValueError(f"{u!r} is not an endpoint of {edge}")
    v = edge[1] if edge[0] == u else edge[0]
    if g is None:
        g = build_display_graph(profile)
    if psi is None:
        psi = agreement_cut_function(supertree, profile)[make_edge(*edge)]
    far = supertree.side_labels(u, v)
    parts = []
    for comp in g.components(psi):
        li = far & comp
        if li:
            parts.append(frozenset(li))
    parts.sort(key=min)
    return v, far, parts


def split_edge_at(supertree: PhyloTree, edge, endpoint, profile: Profile) -> PhyloTree:
    """
    Split supertree edge ``{u, v}`` at ``u = endpoint``.

    The labels beyond ``v`` are partitioned by the components of
    ``G - Psi(edge)`` into L_1..L_m (m > 1 required).  The subtree beyond
    ``v`` is deleted and, for each L_i, the minimal subtree spanning L_i
    (rooted at its vertex nearest ``v``, other degree-2 vertices
    suppressed) is hung directly from ``u``.
    """
    edge = make_edge(*edge)
    if edge not in supertree.edges:
        raise ValueError(f"{edge} is not an edge of the supertree")
    u = endpoint
    v, far, parts = _far_partition(supertree, edge, u, profile)
    if len(parts) < 2:
        raise ValueError("far side is not split by the cut (m = 1); try the other endpoint")
    if isinstance(u, str):
        raise ValueError("cannot split an edge at a leaf")

    # rooted view of the far side
    parent = {v: u}
    order = [v]
    for x in order:
        for w in supertree.neighbors(x):
            if w != parent[x]:
                parent[w] = x
                order.append(w)
    far_vertices = set(order)
    children = {x: [w for w in supertree.neighbors(x) if w != parent[x]] for x in order}
    below: dict = {}
    for x in reversed(order):
        below[x] = frozenset((x,)) if isinstance(x, str) else frozenset().union(*(below[w] for w in children[x]))

    next_id = max(supertree.internal_vertices, default=0) + 1
    edges = [e for e in supertree.edges if e[0] not in far_vertices and e[1] not in far_vertices]
    for li in parts:
        # walk down from v to the highest vertex whose subtree splits L_i
        def build(x):
            nonlocal next_id
            kids = [w for w in children[x] if below[w] & li]
            if isinstance(x, str):
                return x
            if len(kids) == 1:
                return build(kids[0])
            me = next_id
            next_id += 1
            for w in kids:
                edges.append((me, build(w)))
            return me

        edges.append((u, build(v)))
    return PhyloTree(edges)


def splittable_edge(supertree: PhyloTree, profile: Profile):
    """First internal edge (in canonical order) whose cut-function value is
    not a minimal cut, with an endpoint it can be split at; else None."""
    g = build_display_graph(profile)
    psi = agreement_cut_function(supertree, profile)
    for e in sorted(supertree.internal_edges(), key=edge_key):
        if is_minimal_cut(g, psi[e]):
            continue
        for u in e:
            _, _, parts = _far_partition(supertree, e, u, profile, g, psi[e])
            if len(parts) > 1:
                return e, u
    return None


def minimize_cut_function(supertree: PhyloTree, profile: Profile, max_steps: int = 10_000) -> PhyloTree:
    """Split edges until every internal edge maps to a minimal cut."""
    tree = supertree
    for _ in range(max_steps):
        found = splittable_edge(tree, profile)
        if found is None:
            return tree
        tree = split_edge_at(tree, found[0], found[1], profile)
    raise RuntimeError("edge splitting did not reach a fixpoint")
