"""Minimal cuts of a display graph and the predicates defined on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .display import DisplayGraph, edge_name
from .tree import Split, edge_key, make_edge


class ResourceLimitExceeded(RuntimeError):
    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"display graph has {size} vertices, limit is {limit}")


class DisconnectedGraphError(ValueError):
    pass


class NotACutError(ValueError):
    pass


class NotNiceCutError(ValueError):
    pass


@dataclass(frozen=True)
class Cut:
    """A minimal cut: its edges plus the two sides of ``G - edges``.

    ``side_a`` is the side holding the least vertex of the graph.  Equality
    and hashing use the edge set only.
    """

    edges: frozenset
    side_a: frozenset = field(compare=False)
    side_b: frozenset = field(compare=False)
    per_tree: dict = field(compare=False, repr=False)
    mask_a: int = field(compare=False, repr=False, default=0)

    def sort_key(self) -> tuple:
        return tuple(sorted(edge_key(e) for e in self.edges))

    def edge_names(self) -> list:
        return [edge_name(e) for e in sorted(self.edges, key=edge_key)]

    def __len__(self):
        return len(self.edges)

    def __contains__(self, e):
        return make_edge(*e) in self.edges

    def __str__(self):
        return "{" + ", ".join(self.edge_names()) + "}"


def sort_cuts(cuts: Iterable[Cut]) -> list:
    return sorted(cuts, key=Cut.sort_key)


def _per_tree(g: DisplayGraph, edges) -> dict:
    out: dict = {}
    for e in edges:
        out.setdefault(g.edge_tree[e], set()).add(e)
    return {i: frozenset(es) for i, es in out.items()}


def _cut_from_mask(g: DisplayGraph, mask_a: int, edge_masks) -> Cut:
    crossing = frozenset(
        e for e, (bu, bv) in edge_masks if bool(mask_a & bu) != bool(mask_a & bv)
    )
    side_a = g.unmask(mask_a)
    side_b = frozenset(g.vertices) - side_a
    return Cut(crossing, side_a, side_b, _per_tree(g, crossing), mask_a)


def _edge_masks(g: DisplayGraph):
    return [(e, (1 << g.index[e[0]], 1 << g.index[e[1]])) for e in g.edges]


def _bits(m: int):
    while m:
        b = m & -m
        yield b.bit_length() - 1
        m ^= b


def _reach(nbr, start: int, allowed: int) -> int:
    """Bitmask of vertices reachable from ``start`` (a bitmask) inside ``allowed``."""
    seen = frontier = start & allowed
    while frontier:
        new = 0
        for k in _bits(frontier):
            new |= nbr[k]
        new &= allowed & ~seen
        seen |= new
        frontier = new
    return seen


def make_cut(g: DisplayGraph, edges: Iterable) -> Cut:
    """Wrap an edge set as a :class:`Cut`, checking it is a minimal cut of ``g``."""
    edges = frozenset(make_edge(*e) for e in edges)
    unknown = [e for e in edges if e not in g.edge_tree]
    if unknown:
        raise NotACutError(f"edges not in the display graph: {', '.join(map(edge_name, unknown))}")
    if not is_minimal_cut(g, edges):
        raise NotACutError("{" + ", ".join(edge_name(e) for e in sorted(edges, key=edge_key)) + "} is not a minimal cut")
    comps = g.components(edges)
    side_a = next(c for c in comps if g.vertices[0] in c)
    return Cut(edges, side_a, frozenset(g.vertices) - side_a, _per_tree(g, edges), g.mask(side_a))


def is_minimal_cut(g: DisplayGraph, edges: Iterable) -> bool:
    """Definitional check: ``G - F`` has two components and every edge of F
    joins them (so putting any one back reconnects the graph)."""
    edges = {make_edge(*e) for e in edges}
    if not edges or not all(e in g.edge_tree for e in edges):
        return False
    comps = g.components(edges)
    if len(comps) != 2:
        return False
    a = comps[0]
    return all((u in a) != (v in a) for u, v in edges)


def enumerate_minimal_cuts(g: DisplayGraph, limit: int | None = None) -> list:
    """
    All minimal cuts of a connected display graph.

    A minimal cut is exactly the edge set E(A, V - A) of a bipartition whose
    two sides both induce connected subgraphs.  Connected sets A containing
    the least vertex are grown one neighbour at a time; a branch is dropped
    as soon as the vertices already excluded from A cannot all end up in a
    single connected complement.  Returned in canonical order.
    """
    n = len(g.vertices)
    if limit is not None and n > limit:
        raise ResourceLimitExceeded(n, limit)
    if n <= 1:
        return []
    nbr = g._nbr_mask
    full = (1 << n) - 1
    if _reach(nbr, 1, full) != full:
        raise DisconnectedGraphError("minimal cuts are only enumerated on connected graphs")
    edge_masks = _edge_masks(g)
    found: list = []

    def grow(a: int, cand: int, banned: int):
        rest = full & ~a
        if rest:
            if banned:
                anchor = banned & -banned
                if _reach(nbr, anchor, rest) & banned != banned:
                    return
            if _reach(nbr, rest & -rest, rest) == rest:
                found.append(a)
        c = cand
        b = banned
        while c:
            bit = c & -c
            c ^= bit
            k = bit.bit_length() - 1
            grow(a | bit, (c | nbr[k]) & ~(a | bit | b), b)
            b |= bit

    grow(1, nbr[0], 0)
    return sort_cuts(_cut_from_mask(g, m, edge_masks) for m in found)


def common_endpoint(edges) -> bool:
    edges = list(edges)
    if len(edges) <= 1:
        return True
    shared = set(edges[0])
    for e in edges[1:]:
        shared &= set(e)
    return bool(shared)


def _per_tree_of(g, cut) -> dict:
    if isinstance(cut, Cut):
        return cut.per_tree
    return _per_tree(g, {make_edge(*e) for e in cut})


def is_legal_cut(g: DisplayGraph, cut) -> bool:
    """Every tree's edges in the cut share a common endpoint."""
    return all(common_endpoint(es) for es in _per_tree_of(g, cut).values())


def max_edges_per_tree(g: DisplayGraph, cut) -> int:
    return max((len(es) for es in _per_tree_of(g, cut).values()), default=0)


def is_nice_cut(g: DisplayGraph, cut) -> bool:
    """Legal, and every component of ``G - F`` keeps at least one edge."""
    if not is_legal_cut(g, cut):
        return False
    edges = cut.edges if isinstance(cut, Cut) else cut
    # a connected component has an edge iff it has two or more vertices
    return all(len(c) >= 2 for c in g.components(edges))


def _parallel_one_way(c1: Cut, c2: Cut, vertex_index) -> bool:
    touched = 0
    for u, v in c2.edges - c1.edges:
        touched |= (1 << vertex_index[u]) | (1 << vertex_index[v])
    return touched & c1.mask_a == touched or touched & c1.mask_a == 0


def cuts_parallel(g: DisplayGraph, c1, c2) -> bool:
    """At most one component of ``G - c1`` contains edges of ``c2``, and vice versa."""
    if not isinstance(c1, Cut):
        c1 = make_cut(g, c1)
    if not isinstance(c2, Cut):
        c2 = make_cut(g, c2)
    return _parallel_one_way(c1, c2, g.index) and _parallel_one_way(c2, c1, g.index)


def parallel_one_way(g: DisplayGraph, c1: Cut, c2: Cut) -> bool:
    """The literal one-directional test: edges of ``c2`` meet at most one
    component of ``G - c1``."""
    return _parallel_one_way(c1, c2, g.index)


def sigma_of_cut(g: DisplayGraph, cut) -> Split:
    """The split of the graph's labels given by the two sides of a nice cut."""
    if not isinstance(cut, Cut):
        cut = make_cut(g, cut)
    if not is_nice_cut(g, cut):
        raise NotNiceCutError(f"cut {cut} is not nice")
    a = {v for v in cut.side_a if isinstance(v, str)}
    b = {v for v in cut.side_b if isinstance(v, str)}
    return Split.of(a, b)


def splits_of_cutset(g: DisplayGraph, cuts: Iterable) -> frozenset:
    """Nontrivial splits induced by a family of nice minimal cuts."""
    out = set()
    for c in cuts:
        s = sigma_of_cut(g, c)
        if not s.is_trivial:
            out.add(s)
    return frozenset(out)


def legal_minimal_cuts(g: DisplayGraph, limit: int | None = None) -> list:
    return [c for c in enumerate_minimal_cuts(g, limit) if is_legal_cut(g, c)]
