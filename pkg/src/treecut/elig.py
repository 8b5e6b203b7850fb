"""
Edge label intersection graph (the line graph of the display graph) and
minimal-separator predicates on it.

Separators here are sets of display-graph edges, since those are the
vertices of the line graph.  Nothing in this module goes through the cut
machinery, so it can be used to cross-check it.
"""

from __future__ import annotations

from typing import Iterable

from .display import DisplayGraph, _dot_id, edge_name
from .tree import edge_key, make_edge


class Elig:
    def __init__(self, g: DisplayGraph):
        self.graph = g
        self.vertices = g.edges
        adj = {e: set() for e in self.vertices}
        for v in g.vertices:
            inc = [make_edge(v, w) for w in g.adj[v]]
            for x in inc:
                adj[x].update(inc)
        for x in adj:
            adj[x].discard(x)
        self.adj = {x: frozenset(ns) for x, ns in adj.items()}
        self._comp_cache: dict = {}

    @property
    def profile(self):
        return self.graph.profile

    def neighbors(self, x) -> frozenset:
        return self.adj[x]

    @property
    def n_edges(self) -> int:
        return sum(len(ns) for ns in self.adj.values()) // 2

    def components(self, removed: Iterable = ()) -> list:
        removed = frozenset(removed)
        hit = self._comp_cache.get(removed)
        if hit is not None:
            return hit
        seen = set(removed)
        out = []
        for s in self.vertices:
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                for w in self.adj[stack.pop()]:
                    if w not in seen and w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            out.append(frozenset(comp))
        if len(self._comp_cache) < 4096:
            self._comp_cache[removed] = out
        return out

    def neighborhood(self, vertices) -> frozenset:
        """Open neighbourhood of a vertex set."""
        out = set()
        for x in vertices:
            out |= self.adj[x]
        return frozenset(out - set(vertices))

    def full_components(self, f) -> list:
        f = frozenset(f)
        return [c for c in self.components(f) if self.neighborhood(c) >= f]

    def to_dot(self, name: str = "elig") -> str:
        """Vertices are named ``uv`` after the display-graph edge ``{u, v}``."""
        label = lambda e: f"{e[0]}{e[1]}"
        lines = [f"graph {name} {{"]
        for x in self.vertices:
            lines.append(f"  {_dot_id(edge_name(x))} [label={_dot_id(label(x))}];")
        pairs = sorted(
            ((x, y) for x in self.vertices for y in self.adj[x] if edge_key(x) < edge_key(y)),
            key=lambda p: (edge_key(p[0]), edge_key(p[1])),
        )
        for x, y in pairs:
            lines.append(f"  {_dot_id(edge_name(x))} -- {_dot_id(edge_name(y))};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"Elig({len(self.vertices)} vertices, {self.n_edges} edges)"


def build_elig(g: DisplayGraph) -> Elig:
    return Elig(g)


def _normalize(f) -> frozenset:
    return frozenset(make_edge(*e) for e in f)


def is_minimal_separator(elig: Elig, f) -> bool:
    """True iff removing ``f`` leaves at least two full components."""
    f = _normalize(f)
    if not f <= set(elig.vertices):
        raise ValueError("separator contains non-vertices")
    return len(elig.full_components(f)) >= 2


def is_legal_separator(elig: Elig, f) -> bool:
    """Each tree's vertices in ``f`` are pairwise adjacent in that tree's line
    graph, i.e. its edges in ``f`` all share one endpoint."""
    f = _normalize(f)
    g = elig.graph
    per_tree: dict = {}
    for e in f:
        per_tree.setdefault(g.edge_tree[e], []).append(e)
    for edges in per_tree.values():
        shared = set(edges[0])
        for e in edges[1:]:
            shared &= set(e)
        if not shared:
            return False
    return True


def _parallel_one_way(elig: Elig, f1: frozenset, f2: frozenset) -> bool:
    rest = f2 - f1
    hit = [c for c in elig.components(f1) if c & rest]
    return len(hit) <= 1


def separators_parallel(elig: Elig, f1, f2) -> bool:
    f1, f2 = _normalize(f1), _normalize(f2)
    return _parallel_one_way(elig, f1, f2) and _parallel_one_way(elig, f2, f1)


def minimal_separators(elig: Elig) -> list:
    """
    All minimal separators of the line graph.

    Seeds are the neighbourhoods of components of ``G - N[x]``; each
    separator ``S`` and vertex ``x`` in it then yields the neighbourhoods of
    the components of ``G - (S + N(x))``.  Closing under this rule produces
    every minimal separator exactly once.
    """
    seps: set = set()
    queue = []

    def offer(removed):
        for c in elig.components(removed):
            s = elig.neighborhood(c)
            if s and s not in seps:
                seps.add(s)
                queue.append(s)

    for x in elig.vertices:
        offer(elig.adj[x] | {x})
    while queue:
        s = queue.pop()
        for x in s:
            offer(s | elig.adj[x])
    return sorted(seps, key=lambda s: tuple(sorted(edge_key(e) for e in s)))


def legal_minimal_separators(elig: Elig) -> list:
    return [s for s in minimal_separators(elig) if is_legal_separator(elig, s)]
