from __future__ import annotations

import pytest
from conftest import complete, cycle_pairs, graph, ppath

from atomembed.multigraph import (
    GraphError,
    Multigraph,
    ShapeKind,
    bridge_parts,
    bridges,
    classify_shape,
    cut_edges,
    is_cycle,
    is_separable_bridge,
    is_three_connected,
    proper_cut_vertices,
    proper_two_cut_members,
    proper_two_cuts,
    proper_two_edge_cuts,
    suppressed_graph,
)


# ---------------------------------------------------------------------------
# basic structure
# ---------------------------------------------------------------------------


def test_parallel_edges_keep_their_names():
    g = graph([("a", "b"), ("a", "b"), ("b", "c")])
    assert g.degree("a") == 2
    assert g.edges() == ["e0", "e1", "e2"]
    g.remove_edge("e0")
    assert g.ends("e1") == ("a", "b")
    assert g.degree("a") == 1


def test_loops_rejected_unless_allowed():
    with pytest.raises(GraphError):
        graph([("a", "a")])
    g = Multigraph(edges=[("l", "a", "a")], allow_loops=True)
    assert g.degree("a") == 2


def test_duplicate_edge_id_rejected():
    g = graph([("a", "b")])
    with pytest.raises(GraphError):
        g.add_edge("e0", "b", "c")


def test_components_and_copy_are_independent():
    g = graph([("a", "b"), ("c", "d")])
    h = g.copy()
    h.remove_vertex("a")
    assert len(g.components()) == 2
    assert g.has_vertex("a") and not h.has_vertex("a")


# ---------------------------------------------------------------------------
# suppression of degree-2 vertices
# ---------------------------------------------------------------------------


def test_suppress_k4_is_identity():
    g = complete(4)
    gm, corr = suppressed_graph(g)
    assert sorted(gm.vertices()) == sorted(g.vertices())
    assert gm.number_of_edges() == 6
    assert all(len(path.edges) == 1 for path in corr.values())


def test_suppress_three_paths_gives_parallel_edges():
    gm, corr = suppressed_graph(ppath(3, [2, 3, 4]))
    assert sorted(gm.vertices()) == ["u", "w"]
    assert gm.number_of_edges() == 3
    assert sorted(len(p.edges) for p in corr.values()) == [2, 3, 4]


def test_suppress_hanging_triangle_becomes_loop():
    g = complete(4)
    g.add_edge("t1", "v0", "x")
    g.add_edge("t2", "x", "y")
    g.add_edge("t3", "y", "v0")
    gm, _ = suppressed_graph(g)
    assert gm.number_of_vertices() == 4
    loops = [e for e in gm.edges() if gm.ends(e) == ("v0", "v0")]
    assert len(loops) == 1


def test_cycle_detection():
    assert is_cycle(graph(cycle_pairs(["a", "b", "c", "d", "e"])))
    assert not is_cycle(graph([("a", "b"), ("b", "c")]))


# ---------------------------------------------------------------------------
# bridges and cuts
# ---------------------------------------------------------------------------


def test_k4_single_bridge_at_a_vertex():
    assert len(bridges(complete(4), {"v0"})) == 1


def test_pstar_center_has_one_bridge_per_arm():
    pairs = []
    for arm in range(3):
        for k in range(3):
            pairs += [("c", f"m{arm}.{k}"), (f"m{arm}.{k}", f"p{arm}")]
    parts = bridges(graph(pairs), {"c"})
    assert len(parts) == 3
    assert all(classify_shape(b).kind is ShapeKind.PPATH for b in parts)


def test_single_edge_is_its_own_bridge():
    g = graph([("u", "v"), ("u", "x"), ("x", "v")])
    parts = bridge_parts(g, {"u", "v"})
    assert len(parts) == 2
    assert sum(p.is_single_edge() for p in parts) == 1


def test_k4_has_no_proper_cuts():
    g = complete(4)
    assert proper_cut_vertices(g) == set()
    assert proper_two_cuts(g) == []


def test_ppath_poles_form_proper_two_cut():
    g = ppath(3)
    assert proper_cut_vertices(g) == set()
    assert [set(c) for c in proper_two_cuts(g)] == [{"u", "w"}]
    assert proper_two_cut_members(g) == {"u", "w"}


def test_bowtie_has_proper_cut_vertex():
    g = graph(cycle_pairs(["w", "a", "b"]) + cycle_pairs(["w", "c", "d"]))
    assert proper_cut_vertices(g) == {"w"}


def test_cycle_has_no_cuts_by_convention():
    g = graph(cycle_pairs(["a", "b", "c", "d"]))
    assert proper_cut_vertices(g) == set()
    assert proper_two_cuts(g) == []
    assert proper_two_edge_cuts(g) == []


def test_two_edge_cut_between_two_k4s():
    g = complete(4, "a")
    h = complete(4, "b")
    for e in h.edges():
        g.add_edge("h" + e, *h.ends(e))
    g.add_edge("x", "a0", "b0")
    g.add_edge("y", "a1", "b1")
    cuts = [set(c) for c in proper_two_edge_cuts(g)]
    assert {"x", "y"} in cuts


def test_cut_edges_of_a_path_hanging_off_triangle():
    g = graph(cycle_pairs(["a", "b", "c"]) + [("c", "d")])
    assert cut_edges(g) == ["e3"]


def test_separability_by_degrees():
    g = ppath(3)
    for part in bridge_parts(g, {"u", "w"}):
        assert is_separable_bridge(g, {"u", "w"}, part)

    # deg(u) = 5 with a bridge taking two of its edges: 2 is neither 1 nor 4
    pairs = [("u", "x"), ("x", "w"), ("u", "y"), ("y", "w"), ("x", "y")]
    pairs += [("u", "z1"), ("z1", "w"), ("u", "z2"), ("z2", "w"), ("u", "z3"), ("z3", "w")]
    g = graph(pairs)
    part = next(p for p in bridge_parts(g, {"u", "w"}) if "x" in p.interior)
    assert g.degree("u") == 5 and part.degree_at(g, "u") == 2
    assert not is_separable_bridge(g, {"u", "w"}, part)


def test_three_connectivity():
    assert is_three_connected(complete(4))
    assert not is_three_connected(ppath(3))


# ---------------------------------------------------------------------------
# shapes
# ---------------------------------------------------------------------------


def test_shape_cycle():
    assert classify_shape(graph(cycle_pairs(list("abcde")))).kind is ShapeKind.CYCLE


def test_shape_subdivided_k4():
    g = complete(4)
    a, b = g.ends("e0")
    g.remove_edge("e0")
    g.add_edge("s1", a, "mid")
    g.add_edge("s2", "mid", b)
    assert classify_shape(g).kind is ShapeKind.SUBDIVIDED_3CONNECTED


def test_shape_ppath_and_pstar():
    shape = classify_shape(ppath(3))
    assert shape.kind is ShapeKind.PPATH and set(shape.poles) == {"u", "w"}

    pairs = []
    for arm in range(2):
        for k in range(3):
            pairs += [("c", f"m{arm}.{k}"), (f"m{arm}.{k}", f"p{arm}")]
    shape = classify_shape(graph(pairs))
    assert shape.kind is ShapeKind.PSTAR and shape.center == "c"


def test_shape_requires_connected_graph():
    with pytest.raises(GraphError):
        classify_shape(graph([("a", "b"), ("c", "d")]))
