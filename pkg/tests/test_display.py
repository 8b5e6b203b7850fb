import pytest

from treecut.display import build_display_graph, connected_components, edge_name
from treecut.tree import Profile


def test_reference_sizes(display_only, with_ast):
    g = build_display_graph(display_only)
    assert (len(g.vertices), len(g.edges)) == (14, 18)
    h = build_display_graph(with_ast)
    assert (len(h.vertices), len(h.edges)) == (12, 14)


def test_internal_numbering_is_global(display_only):
    g = build_display_graph(display_only)
    assert sorted(v for v in g.vertices if isinstance(v, int)) == list(range(1, 8))
    assert {g.internal_tree[v] for v in (1, 2, 3)} == {0}
    assert {g.internal_tree[v] for v in (4, 5, 6, 7)} == {1}


def test_edge_ownership(display_only):
    g = build_display_graph(display_only)
    assert g.edge_tree[g.parse_edge("1-2")] == 0
    assert g.edge_tree[g.parse_edge("4-5")] == 1
    assert len(g.tree_edges[0]) + len(g.tree_edges[1]) == 18


def test_incidence(with_ast):
    g = build_display_graph(with_ast)
    assert {edge_name(e) for e in g.incident_edges("c")} == {"2-c", "6-c"}
    assert g.degree("f") == 1


def test_parse_edge_rejects_unknown(with_ast):
    g = build_display_graph(with_ast)
    with pytest.raises(KeyError):
        g.parse_edge("1-9")


def test_disconnected_profile():
    p = Profile.from_newick(["(a,b,(c,d));", "(e,f,(g,h));", "(a,c,(b,x));"])
    g = build_display_graph(p)
    assert not g.is_connected()
    parts = connected_components(g)
    assert sorted(len(q) for q in parts) == [1, 2]


def test_dot_is_stable(display_only):
    a = build_display_graph(display_only).to_dot()
    b = build_display_graph(Profile.from_newick([t.newick() for t in display_only])).to_dot()
    assert a == b
    assert a.startswith("graph") and a.rstrip().endswith("}")
