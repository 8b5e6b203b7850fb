"""Display graph of a profile: the union of its trees with equal labels merged."""

from __future__ import annotations

from typing import Iterable

from .tree import Edge, Profile, Vertex, edge_key, make_edge, vkey

TREE_COLORS = ("red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan")


def edge_name(e: Edge) -> str:
    return f"{e[0]}-{e[1]}"


def _dot_id(v) -> str:
    return '"' + str(v).replace("\\", "\\\\").replace('"', '\\"') + '"'


class DisplayGraph:
    """
    Display graph of ``profile`` restricted to the trees in ``tree_indices``.

    Internal vertices are numbered globally: the internal vertices of tree
    ``i`` (in increasing order of their ids in that tree) get consecutive
    ints following those of trees ``0..i-1``.  A subgraph built for a subset
    of trees keeps the global numbering, so edges mean the same thing in
    every component.

    Attributes
    ----------
    vertices    : tuple   Sorted vertices (ints internal, labels leaves).
    edges       : tuple   Sorted canonical edges.
    edge_tree   : dict    edge -> index of the tree it came from.
    tree_edges  : dict    tree index -> frozenset of its display edges.
    index       : dict    vertex -> bit position (for bitmask work).
    """

    def __init__(self, profile: Profile, tree_indices: Iterable[int] | None = None):
        self.profile = profile
        if tree_indices is None:
            tree_indices = range(len(profile))
        self.tree_indices = tuple(sorted(set(tree_indices)))
        self._global: dict = {}
        offset = 0
        for i, tree in enumerate(profile.trees):
            for rank, v in enumerate(tree.internal_vertices, start=1):
                self._global[(i, v)] = offset + rank
            offset += len(tree.internal_vertices)

        adj: dict = {}
        edge_tree: dict = {}
        tree_edges: dict = {}
        internal_tree: dict = {}
        for i in self.tree_indices:
            tree = profile.trees[i]
            mine = set()
            for v in tree.vertices:
                gv = self.vertex_of(i, v)
                adj.setdefault(gv, set())
                if isinstance(gv, int):
                    internal_tree[gv] = i
            for u, v in tree.edges:
                e = self.edge_of(i, (u, v))
                # two 2-leaf trees on the same labels share their edge; keep the first owner
                edge_tree.setdefault(e, i)
                mine.add(e)
                adj[e[0]].add(e[1])
                adj[e[1]].add(e[0])
            tree_edges[i] = frozenset(mine)

        self.vertices = tuple(sorted(adj, key=vkey))
        self.edges = tuple(sorted(edge_tree, key=edge_key))
        self.edge_tree = edge_tree
        self.tree_edges = tree_edges
        self.internal_tree = internal_tree
        self.adj = {v: frozenset(ns) for v, ns in adj.items()}
        self.index = {v: k for k, v in enumerate(self.vertices)}
        self._nbr_mask = [0] * len(self.vertices)
        for v, ns in self.adj.items():
            m = 0
            for w in ns:
                m |= 1 << self.index[w]
            self._nbr_mask[self.index[v]] = m

    # ---- identity maps --------------------------------------------------

    def vertex_of(self, tree_index: int, v: Vertex) -> Vertex:
        """Display-graph vertex for vertex ``v`` of tree ``tree_index``."""
        if isinstance(v, str):
            return v
        return self._global[(tree_index, v)]

    def edge_of(self, tree_index: int, e: Edge) -> Edge:
        return make_edge(self.vertex_of(tree_index, e[0]), self.vertex_of(tree_index, e[1]))

    def internal_edges_of(self, tree_index: int) -> list:
        tree = self.profile.trees[tree_index]
        return [self.edge_of(tree_index, e) for e in tree.internal_edges()]

    # ---- queries --------------------------------------------------------

    @property
    def labels(self) -> frozenset:
        return frozenset(v for v in self.vertices if isinstance(v, str))

    @staticmethod
    def is_leaf(v: Vertex) -> bool:
        return isinstance(v, str)

    @staticmethod
    def is_internal_edge(e: Edge) -> bool:
        return isinstance(e[0], int) and isinstance(e[1], int)

    def incident_edges(self, u: Vertex) -> frozenset:
        if u not in self.adj:
            raise KeyError(f"unknown vertex {u!r}")
        return frozenset(make_edge(u, w) for w in self.adj[u])

    def degree(self, u: Vertex) -> int:
        return len(self.adj[u])

    def parse_edge(self, name: str) -> Edge:
        """Inverse of :func:`edge_name` for this graph's vertices."""
        by_name = {edge_name(e): e for e in self.edges}
        try:
            return by_name[name]
        except KeyError:
            raise KeyError(f"no edge named {name!r}") from None

    def mask(self, vertices: Iterable[Vertex]) -> int:
        m = 0
        for v in vertices:
            m |= 1 << self.index[v]
        return m

    def unmask(self, m: int) -> frozenset:
        return frozenset(v for k, v in enumerate(self.vertices) if m >> k & 1)

    def components(self, removed: Iterable[Edge] = ()) -> list:
        """Vertex sets of the connected components of ``G - removed``."""
        removed = {make_edge(*e) for e in removed}
        seen: set = set()
        out = []
        for s in self.vertices:
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                x = stack.pop()
                for w in self.adj[x]:
                    if w not in comp and make_edge(x, w) not in removed:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            out.append(frozenset(comp))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def component_graphs(self) -> list:
        """One display graph per connected component, in order of least vertex."""
        out = []
        for comp in self.components():
            trees = set()
            for v in comp:
                if isinstance(v, int):
                    trees.add(self.internal_tree[v])
                else:
                    trees.update(i for i in self.tree_indices if v in self.profile.trees[i].labels)
            out.append(DisplayGraph(self.profile, trees))
        return out

    def subprofile(self) -> Profile:
        return Profile(tuple(self.profile.trees[i] for i in self.tree_indices))

    # ---- export ---------------------------------------------------------

    def to_dot(self, name: str = "display") -> str:
        """Leaves as boxes, internal vertices as circles, edges coloured by tree."""
        lines = [f"graph {name} {{"]
        for v in self.vertices:
            shape = "box" if isinstance(v, str) else "circle"
            lines.append(f"  {_dot_id(v)} [shape={shape}];")
        for e in self.edges:
            i = self.edge_tree[e]
            color = TREE_COLORS[i % len(TREE_COLORS)]
            lines.append(f"  {_dot_id(e[0])} -- {_dot_id(e[1])} [color={color}, tree={i}];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"DisplayGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"


def build_display_graph(profile: Profile) -> DisplayGraph:
    return DisplayGraph(profile)


def connected_components(g: DisplayGraph) -> list:
    """Sub-profiles whose display graphs are the components of ``g``."""
    return [c.subprofile() for c in g.component_graphs()]


def incident_edges(g: DisplayGraph, u: Vertex) -> frozenset:
    return g.incident_edges(u)
