"""
Unrooted leaf-labelled trees and their splits.

Vertex convention
-----------------
Leaves are identified by their label (a ``str``); internal vertices are
``int``.  Because a label is unique within a tree, the leaf map is the
identity and never stored separately.  Edges are canonical ``(u, v)``
tuples ordered by :func:`vkey` (internal vertices first, then labels).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Union

Vertex = Union[int, str]
Edge = tuple

_PLAIN_LABEL = re.compile(r"^[A-Za-z0-9_.|-]+$")


class InvalidTreeError(ValueError):
    pass


class NewickError(ValueError):
    """Malformed Newick input; ``pos`` is the 0-based offset of the problem."""

    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.pos = pos
        self.line = self.column = None
        if pos is not None and text is not None:
            self.line = text.count("\n", 0, pos) + 1
            self.column = pos - (text.rfind("\n", 0, pos) + 1) + 1
            message = f"{message} (line {self.line}, column {self.column})"
        elif pos is not None:
            message = f"{message} (position {pos})"
        super().__init__(message)


class IncompatibleSplitsError(ValueError):
    def __init__(self, first: "Split", second: "Split"):
        self.pair = (first, second)
        super().__init__(f"splits {first} and {second} are incompatible")


def vkey(v: Vertex) -> tuple:
    """Sort key putting internal vertices (ints) before leaves (labels)."""
    if isinstance(v, int):
        return (0, v, "")
    return (1, 0, v)


def make_edge(u: Vertex, v: Vertex) -> Edge:
    return (u, v) if vkey(u) <= vkey(v) else (v, u)


def edge_key(e: Edge) -> tuple:
    return (vkey(e[0]), vkey(e[1]))


def _fmt_labels(labels) -> str:
    labels = sorted(labels)
    if all(len(x) == 1 for x in labels):
        return "".join(labels)
    return ",".join(labels)


# ---------------------------------------------------------------------------
# Splits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Split:
    """A bipartition ``side_a | side_b`` of a label set.

    Stored canonically: ``side_a`` holds the lexicographically least label,
    so equal bipartitions compare and hash equal.  Build with :meth:`of`.
    """

    side_a: frozenset
    side_b: frozenset

    def __post_init__(self):
        if not self.side_a or not self.side_b:
            raise ValueError("both sides of a split must be non-empty")
        if self.side_a & self.side_b:
            raise ValueError("split sides overlap")
        if min(self.side_b) < min(self.side_a):
            raise ValueError("split is not in canonical orientation; use Split.of")

    @classmethod
    def of(cls, a: Iterable[str], b: Iterable[str]) -> "Split":
        a, b = frozenset(a), frozenset(b)
        if a and b and min(b) < min(a):
            a, b = b, a
        return cls(a, b)

    @classmethod
    def parse(cls, text: str) -> "Split":
        """``"ab|cd"`` (single-character labels) or ``"x1,x2|y1,y2"``."""
        left, right = text.split("|")
        if "," in text:
            return cls.of(left.split(","), right.split(","))
        return cls.of(left, right)

    @property
    def labels(self) -> frozenset:
        return self.side_a | self.side_b

    @property
    def is_trivial(self) -> bool:
        return len(self.side_a) == 1 or len(self.side_b) == 1

    def restrict(self, labels) -> "Split | None":
        """The split induced on ``labels``, or None if one side vanishes."""
        labels = frozenset(labels)
        a, b = self.side_a & labels, self.side_b & labels
        if not a or not b:
            return None
        return Split.of(a, b)

    def separates(self, x: str, y: str) -> bool:
        return (x in self.side_a) != (y in self.side_a)

    def sort_key(self) -> tuple:
        return (sorted(self.side_a), sorted(self.side_b))

    def __str__(self) -> str:
        return f"{_fmt_labels(self.side_a)}|{_fmt_labels(self.side_b)}"

    def __repr__(self) -> str:
        return f"Split({str(self)!r})"


def splits_compatible(s1: Split, s2: Split) -> bool:
    """True iff one of the four pairwise side intersections is empty."""
    return (
        not (s1.side_a & s2.side_a)
        or not (s1.side_a & s2.side_b)
        or not (s1.side_b & s2.side_a)
        or not (s1.side_b & s2.side_b)
    )


def sorted_splits(splits: Iterable[Split]) -> list:
    return sorted(splits, key=Split.sort_key)


# ---------------------------------------------------------------------------
# Trees
# ---------------------------------------------------------------------------


class PhyloTree:
    """
    An unrooted phylogenetic tree.

    Internal vertices have degree >= 3 and leaves degree 1, except for the
    degenerate single-leaf and two-leaf trees.  Instances are immutable.

    Parameters
    ----------
    edges : iterable of (u, v)
        Tree edges; ``str`` endpoints are leaves, ``int`` endpoints internal.
    leaves : iterable of str, optional
        Extra isolated leaves (only meaningful for the single-leaf tree).
    """

    def __init__(self, edges: Iterable[tuple] = (), leaves: Iterable[str] = ()):
        adj: dict = {}
        for u, v in edges:
            for x in (u, v):
                if not isinstance(x, (int, str)) or isinstance(x, bool):
                    raise InvalidTreeError(f"vertex {x!r} is neither a label nor an int")
            if u == v:
                raise InvalidTreeError(f"self loop at {u!r}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        for leaf in leaves:
            adj.setdefault(leaf, set())
        self._adj = {v: frozenset(ns) for v, ns in adj.items()}
        self._validate()

    def _validate(self):
        adj = self._adj
        if not adj:
            raise InvalidTreeError("a tree needs at least one leaf")
        n_edges = sum(len(ns) for ns in adj.values()) // 2
        if n_edges != len(adj) - 1:
            raise InvalidTreeError("edge count does not match a tree")
        start = next(iter(adj))
        seen = {start}
        stack = [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(adj):
            raise InvalidTreeError("tree is not connected")
        n_leaves = sum(1 for v in adj if isinstance(v, str))
        for v, ns in adj.items():
            if isinstance(v, str):
                if len(ns) > 1:
                    raise InvalidTreeError(f"leaf {v!r} has degree {len(ns)}")
                if not ns and len(adj) > 1:
                    raise InvalidTreeError(f"leaf {v!r} is isolated")
            elif len(ns) < 3:
                raise InvalidTreeError(f"internal vertex {v} has degree {len(ns)}")
        if n_leaves == 0:
            raise InvalidTreeError("tree has no leaves")

    # ---- constructors ---------------------------------------------------

    @classmethod
    def star(cls, labels: Iterable[str]) -> "PhyloTree":
        labels = sorted(labels)
        if len(labels) == 1:
            return cls(leaves=labels)
        if len(labels) == 2:
            return cls([tuple(labels)])
        return cls([(1, x) for x in labels])

    @classmethod
    def from_newick(cls, text: str) -> "PhyloTree":
        return parse_newick(text)

    # ---- structure ------------------------------------------------------

    @property
    def vertices(self) -> list:
        return sorted(self._adj, key=vkey)

    @cached_property
    def edges(self) -> frozenset:
        return frozenset(make_edge(u, v) for u, ns in self._adj.items() for v in ns)

    @cached_property
    def labels(self) -> frozenset:
        return frozenset(v for v in self._adj if isinstance(v, str))

    @property
    def internal_vertices(self) -> list:
        return sorted(v for v in self._adj if isinstance(v, int))

    def neighbors(self, v: Vertex) -> frozenset:
        return self._adj[v]

    def degree(self, v: Vertex) -> int:
        return len(self._adj[v])

    def __contains__(self, v) -> bool:
        return v in self._adj

    @staticmethod
    def is_leaf(v: Vertex) -> bool:
        return isinstance(v, str)

    def internal_edges(self) -> list:
        return sorted(
            (e for e in self.edges if isinstance(e[0], int) and isinstance(e[1], int)),
            key=edge_key,
        )

    def adjacency(self) -> dict:
        """A mutable copy of the adjacency structure."""
        return {v: set(ns) for v, ns in self._adj.items()}

    def side_labels(self, u: Vertex, v: Vertex) -> frozenset:
        """Labels on ``v``'s side once edge ``{u, v}`` is deleted."""
        if v not in self._adj[u]:
            raise KeyError(f"{u!r}-{v!r} is not an edge")
        out = set()
        stack = [(v, u)]
        while stack:
            x, parent = stack.pop()
            if isinstance(x, str):
                out.add(x)
            for w in self._adj[x]:
                if w != parent:
                    stack.append((w, x))
        return frozenset(out)

    def edge_split(self, e: Edge) -> tuple:
        """``(labels on e[0]'s side, labels on e[1]'s side)`` for any edge."""
        u, v = e
        return self.side_labels(v, u), self.side_labels(u, v)

    @cached_property
    def splits(self) -> frozenset:
        """One split per internal edge; empty for trees without internal edges."""
        if len(self._adj) < 4:
            return frozenset()
        root = self.internal_vertices[0]
        below: dict = {}
        parent = {root: None}
        order = [root]
        for x in order:
            for w in self._adj[x]:
                if w != parent[x]:
                    parent[w] = x
                    order.append(w)
        for x in reversed(order):
            if isinstance(x, str):
                below[x] = frozenset((x,))
            else:
                below[x] = frozenset().union(*(below[w] for w in self._adj[x] if w != parent[x]))
        out = set()
        for x in order[1:]:
            if isinstance(x, int) and isinstance(parent[x], int):
                out.add(Split.of(below[x], self.labels - below[x]))
        return frozenset(out)

    def relabel_internal(self) -> "PhyloTree":
        """Copy with internal vertices renumbered 1..k in preorder from the
        internal neighbour of the least leaf."""
        if len(self._adj) <= 2:
            return self
        least = min(self.labels)
        root = next(iter(self._adj[least]))
        mapping = {}
        stack = [(root, None)]
        while stack:
            x, parent = stack.pop()
            if isinstance(x, int):
                mapping[x] = len(mapping) + 1
            kids = sorted((w for w in self._adj[x] if w != parent), key=vkey, reverse=True)
            stack.extend((w, x) for w in kids)
        ren = lambda x: mapping.get(x, x) if isinstance(x, int) else x
        return PhyloTree((ren(u), ren(v)) for u, v in self.edges)

    def newick(self) -> str:
        return serialize_newick(self)

    def __str__(self) -> str:
        return serialize_newick(self)

    def __repr__(self) -> str:
        return f"PhyloTree({serialize_newick(self)!r})"


# ---------------------------------------------------------------------------
# Newick
# ---------------------------------------------------------------------------


class _Node:
    __slots__ = ("name", "children")

    def __init__(self, name=None, children=None):
        self.name = name
        self.children = children if children is not None else []


_DELIMS = set("(),:;[]'")


class _NewickReader:
    def __init__(self, text: str, pos: int = 0):
        self.text = text
        self.pos = pos

    def error(self, msg, pos=None):
        return NewickError(msg, self.pos if pos is None else pos, self.text)

    def skip(self):
        text = self.text
        while self.pos < len(text):
            c = text[self.pos]
            if c.isspace():
                self.pos += 1
            elif c == "[":
                end = text.find("]", self.pos)
                if end < 0:
                    raise self.error("unterminated comment")
                self.pos = end + 1
            else:
                break

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def label(self):
        self.skip()
        text = self.text
        if self.pos < len(text) and text[self.pos] == "'":
            start = self.pos
            self.pos += 1
            chars = []
            while True:
                if self.pos >= len(text):
                    raise self.error("unterminated quoted label", start)
                c = text[self.pos]
                if c == "'":
                    if text.startswith("''", self.pos):
                        chars.append("'")
                        self.pos += 2
                        continue
                    self.pos += 1
                    return "".join(chars)
                chars.append(c)
                self.pos += 1
        start = self.pos
        while self.pos < len(text) and text[self.pos] not in _DELIMS and not text[self.pos].isspace():
            self.pos += 1
        return text[start : self.pos] or None

    def branch_length(self):
        if self.peek() == ":":
            self.pos += 1
            self.skip()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos] not in _DELIMS and not self.text[self.pos].isspace():
                self.pos += 1
            try:
                float(self.text[start : self.pos])
            except ValueError:
                raise self.error("bad branch length", start) from None

    def subtree(self, depth=0):
        if depth > 10000:
            raise self.error("nesting too deep")
        if self.peek() == "(":
            self.pos += 1
            node = _Node()
            while True:
                node.children.append(self.subtree(depth + 1))
                c = self.peek()
                if c == ",":
                    self.pos += 1
                elif c == ")":
                    self.pos += 1
                    break
                else:
                    raise self.error(f"expected ',' or ')' but found {c or 'end of input'!r}")
            self.label()  # internal node names are discarded
            self.branch_length()
            return node
        start = self.pos
        name = self.label()
        if name is None:
            raise self.error("empty leaf label", start)
        self.branch_length()
        return _Node(name)

    def tree(self):
        self.skip()
        if self.pos >= len(self.text):
            raise self.error("empty input")
        node = self.subtree()
        if self.peek() != ";":
            raise self.error("expected ';'")
        self.pos += 1
        return node


def _node_to_tree(root: _Node, text: str) -> PhyloTree:
    seen = set()

    def collapse(node):
        # drop unary nodes and check labels as we go
        while not node.name and len(node.children) == 1:
            node = node.children[0]
        if node.name is not None and not node.children:
            if node.name in seen:
                raise NewickError(f"duplicate leaf label {node.name!r}")
            seen.add(node.name)
            return node
        node.children = [collapse(c) for c in node.children]
        return node

    root = collapse(root)
    if not root.children:
        return PhyloTree(leaves=[root.name])
    kids = root.children
    if len(kids) == 2:
        if not kids[0].children and not kids[1].children:
            return PhyloTree([(kids[0].name, kids[1].name)])
        # suppress a degree-2 root by merging it into an internal child
        i = 0 if kids[0].children else 1
        root = _Node(None, kids[i].children + [kids[1 - i]])

    edges = []
    counter = [0]

    def visit(node):
        counter[0] += 1
        me = counter[0]
        for child in node.children:
            if child.children:
                edges.append((me, visit(child)))
            else:
                edges.append((me, child.name))
        return me

    visit(root)
    return PhyloTree(edges)


def parse_newick(text: str) -> PhyloTree:
    """
    Parse one Newick tree terminated by ``;``.

    Branch lengths, internal node names and ``[comments]`` are discarded; a
    degree-2 root is suppressed.  Internal vertices are numbered 1, 2, ...
    in preorder, so ``(a,b,c,(f,(d,e)));`` gets internal vertices 1, 2, 3
    with 1 adjacent to a, b, c.
    """
    if not text or not text.strip():
        raise NewickError("empty input")
    reader = _NewickReader(text)
    node = reader.tree()
    if reader.peek():
        raise reader.error("trailing characters after ';'")
    try:
        return _node_to_tree(node, text)
    except NewickError:
        raise
    except InvalidTreeError as exc:
        raise NewickError(str(exc)) from None


def parse_newick_many(text: str) -> list:
    """Parse consecutive ``;``-terminated trees (one per line or otherwise)."""
    reader = _NewickReader(text)
    trees = []
    while reader.peek():
        trees.append(_node_to_tree(reader.tree(), text))
    if not trees:
        raise NewickError("empty input")
    return trees


def _quote(label: str) -> str:
    if _PLAIN_LABEL.match(label):
        return label
    return "'" + label.replace("'", "''") + "'"


def serialize_newick(tree: PhyloTree) -> str:
    """Deterministic Newick: rooted at the internal neighbour of the least
    label, children ordered by the least label in their subtree."""
    labels = sorted(tree.labels)
    if len(labels) == 1:
        return _quote(labels[0]) + ";"
    if len(labels) == 2:
        return f"({_quote(labels[0])},{_quote(labels[1])});"
    root = next(iter(tree.neighbors(labels[0])))
    least: dict = {}

    def least_label(x, parent):
        key = (x, parent)
        if key not in least:
            if isinstance(x, str):
                least[key] = x
            else:
                least[key] = min(least_label(w, x) for w in tree.neighbors(x) if w != parent)
        return least[key]

    def render(x, parent):
        if isinstance(x, str):
            return _quote(x)
        kids = sorted((w for w in tree.neighbors(x) if w != parent), key=lambda w: least_label(w, x))
        return "(" + ",".join(render(w, x) for w in kids) + ")"

    return render(root, None) + ";"


# ---------------------------------------------------------------------------
# Operations on trees
# ---------------------------------------------------------------------------


def splits_of(tree: PhyloTree) -> frozenset:
    return tree.splits


def tree_from_splits(splits: Iterable[Split], labels: Iterable[str]) -> PhyloTree:
    """
    Build the tree whose nontrivial splits are exactly ``splits``.

    Starts from the star on ``labels`` and refines one split at a time:
    the vertex to split is the one whose branches each fall entirely on one
    side of the new split, with at least two branches on each side.
    """
    labels = frozenset(labels)
    if not labels:
        raise ValueError("label set is empty")
    splits = sorted_splits(s for s in set(splits))
    for s in splits:
        if s.labels != labels:
            raise ValueError(f"split {s} does not bipartition the label set {_fmt_labels(labels)}")
    splits = [s for s in splits if not s.is_trivial]
    for s1, s2 in combinations(splits, 2):
        if not splits_compatible(s1, s2):
            raise IncompatibleSplitsError(s1, s2)
    if len(labels) <= 3:
        return PhyloTree.star(labels)

    adj = {1: set(labels)}
    for x in labels:
        adj[x] = {1}
    next_id = 2

    def branch_labels(v, w):
        out, stack = set(), [(w, v)]
        while stack:
            x, parent = stack.pop()
            if isinstance(x, str):
                out.add(x)
            stack.extend((y, x) for y in adj[x] if y != parent)
        return out

    for s in splits:
        for v in sorted((x for x in adj if isinstance(x, int))):
            a_side, b_side = [], []
            for w in adj[v]:
                below = branch_labels(v, w)
                if below <= s.side_a:
                    a_side.append(w)
                elif below <= s.side_b:
                    b_side.append(w)
                else:
                    break
            else:
                if len(a_side) >= 2 and len(b_side) >= 2:
                    new = next_id
                    next_id += 1
                    adj[new] = set(a_side) | {v}
                    for w in a_side:
                        adj[w].discard(v)
                        adj[w].add(new)
                        adj[v].discard(w)
                    adj[v].add(new)
                    break
        else:  # pragma: no cover - guarded by the compatibility check
            raise AssertionError(f"no vertex found to refine split {s}")
    return PhyloTree(make_edge(u, v) for u, ns in adj.items() for v in ns if vkey(u) < vkey(v))


def restrict(tree: PhyloTree, labels: Iterable[str]) -> PhyloTree:
    """The minimal subtree spanning ``labels`` with degree-2 vertices suppressed."""
    labels = frozenset(labels)
    if not labels:
        raise ValueError("cannot restrict to an empty label set")
    missing = labels - tree.labels
    if missing:
        raise KeyError(f"labels not in tree: {_fmt_labels(missing)}")
    if labels == tree.labels:
        return tree
    adj = tree.adjacency()
    stack = [v for v, ns in adj.items() if len(ns) <= 1 and v not in labels]
    while stack:
        v = stack.pop()
        if v not in adj:
            continue
        for w in adj.pop(v):
            adj[w].discard(v)
            if len(adj[w]) <= 1 and w not in labels:
                stack.append(w)
    for v in [v for v in adj if isinstance(v, int)]:
        if len(adj[v]) == 2:
            x, y = adj.pop(v)
            adj[x].discard(v)
            adj[y].discard(v)
            adj[x].add(y)
            adj[y].add(x)
    if len(adj) == 1:
        return PhyloTree(leaves=adj)
    return PhyloTree(make_edge(u, v) for u, ns in adj.items() for v in ns if vkey(u) < vkey(v))


def _check_labels(supertree: PhyloTree, tree: PhyloTree):
    if not tree.labels <= supertree.labels:
        raise ValueError(
            "tree has labels missing from the supertree: "
            + _fmt_labels(tree.labels - supertree.labels)
        )


def displays(supertree: PhyloTree, tree: PhyloTree) -> bool:
    _check_labels(supertree, tree)
    return tree.splits <= restrict(supertree, tree.labels).splits


def agrees(supertree: PhyloTree, tree: PhyloTree) -> bool:
    _check_labels(supertree, tree)
    return tree.splits == restrict(supertree, tree.labels).splits


def trees_isomorphic(t1: PhyloTree, t2: PhyloTree) -> bool:
    return t1.labels == t2.labels and t1.splits == t2.splits


def contract_edge(tree: PhyloTree, e: Edge) -> PhyloTree:
    """Contract an internal edge, merging its endpoints into ``e[0]``."""
    u, v = e
    if not (isinstance(u, int) and isinstance(v, int)) or v not in tree.neighbors(u):
        raise ValueError(f"{u}-{v} is not an internal edge")
    adj = tree.adjacency()
    for w in adj.pop(v):
        adj[w].discard(v)
        if w != u:
            adj[w].add(u)
            adj[u].add(w)
    return PhyloTree(make_edge(a, b) for a, ns in adj.items() for b in ns if vkey(a) < vkey(b))


# ---------------------------------------------------------------------------
# Profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Profile:
    """An ordered, non-empty collection of input trees."""

    trees: tuple

    def __post_init__(self):
        trees = tuple(self.trees)
        if not trees:
            raise ValueError("a profile needs at least one tree")
        for t in trees:
            if not isinstance(t, PhyloTree):
                raise TypeError(f"expected PhyloTree, got {type(t).__name__}")
        object.__setattr__(self, "trees", trees)

    @classmethod
    def from_newick(cls, texts: Iterable[str]) -> "Profile":
        return cls(tuple(parse_newick(t) for t in texts))

    @cached_property
    def labels(self) -> frozenset:
        return frozenset().union(*(t.labels for t in self.trees))

    def __len__(self):
        return len(self.trees)

    def __iter__(self):
        return iter(self.trees)

    def __getitem__(self, i):
        return self.trees[i]

    def newick(self) -> list:
        return [serialize_newick(t) for t in self.trees]
