from __future__ import annotations

import pytest
from conftest import cycle_pairs, single_atom, two_atoms

from atomembed.instance import Instance, ordinary, virtual
from atomembed.multigraph import ShapeKind, classify_shape
from atomembed.operations import (
    OperationError,
    RewriteTrace,
    Rewriter,
    contract,
    contract_preconditions,
    delete_raw,
    detach_raw,
    enclose,
    enclose_raw,
    normalize,
    replay,
    split_raw,
    stretch_raw,
    suppress_raw,
)
from atomembed.oracle import oracle_decide

K4 = [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")]


def local(inst, atom):
    return inst.local_graph(atom).graph


def fan(hub, spokes):
    return [(hub, s) for s in spokes]


# ---------------------------------------------------------------------------
# Suppress and Split
# ---------------------------------------------------------------------------


def test_suppress_one_edge_pipe():
    inst = two_atoms([("a", "b")], [("x", "y")], [("a", "x")])
    out = suppress_raw(inst, "p")
    assert "p" not in out.pipes
    assert "e2" not in out.edges
    new_edges = [e for e in out.edges if e not in inst.edges]
    assert len(new_edges) == 2
    for e in new_edges:
        u, v, pipe = out.edges[e]
        assert pipe is None and out.vertices[u] == out.vertices[v]


def test_suppress_two_edge_pipe_joins_through_hubs():
    inst = two_atoms([], [], [("a1", "x1"), ("a2", "x2")])
    out = suppress_raw(inst, "p")
    hub_a = [v for v in out.vertices if v not in inst.vertices and out.vertices[v] == "A"]
    assert len(hub_a) == 1
    assert sorted(local(out, "A").neighbors(ordinary(hub_a[0]))) == [ordinary("a1"), ordinary("a2")]


def test_suppress_rejects_heavy_pipe():
    inst = two_atoms([], [], [("a", "x"), ("a", "y"), ("a", "z")])
    with pytest.raises(OperationError):
        suppress_raw(inst, "p")


def test_split_two_triangles():
    inst = single_atom(cycle_pairs(["a", "b", "c"]) + cycle_pairs(["x", "y", "z"]))
    out = split_raw(inst, "A")
    assert len(out.atoms) == 2
    assert out.vertices["a"] != out.vertices["x"]


def test_split_moves_pipes_with_their_component():
    inst = two_atoms(cycle_pairs(["a", "b", "c"]) + cycle_pairs(["d", "f", "g"]), [], [("a", "x"), ("b", "y"), ("c", "z")])
    out = split_raw(inst, "A")
    (holder,) = [a for a in out.atoms if "p" in out.pipes_at(a) and a != "B"]
    assert out.vertices["a"] == holder
    assert out.vertices["d"] != holder


def test_split_requires_disconnected_local_graph():
    with pytest.raises(OperationError):
        split_raw(single_atom(K4), "A")


# ---------------------------------------------------------------------------
# Detach
# ---------------------------------------------------------------------------


def test_detach_pstar_center():
    pairs = []
    for arm in range(2):
        pairs += fan("c", [f"m{arm}.0", f"m{arm}.1"]) + fan(f"p{arm}", [f"m{arm}.0", f"m{arm}.1"])
    inst = single_atom(pairs)
    assert classify_shape(local(inst, "A")).kind is ShapeKind.PSTAR
    out = detach_raw(inst, "c")
    assert "c" not in out.vertices
    leaves = [v for v in out.vertices if v not in inst.vertices]
    assert len(leaves) == 4
    assert all(local(out, "A").degree(ordinary(v)) == 1 for v in leaves)


def test_detach_ppath_pole():
    inst = single_atom(cycle_pairs(["u", "a", "w", "b"]))
    with pytest.raises(OperationError):
        detach_raw(inst, "u")  # a cycle is not a p-path
    pairs = [("u", "a"), ("a", "w"), ("u", "b"), ("b", "w"), ("u", "c"), ("c", "w")]
    out = detach_raw(single_atom(pairs), "u")
    assert len(out.vertices) == 5 - 1 + 3
    g = local(out, "A")
    assert g.is_connected() and g.max_degree() == 3


def test_detach_rejects_rigid_vertex():
    with pytest.raises(OperationError):
        detach_raw(single_atom(K4), "a")


# ---------------------------------------------------------------------------
# Enclose
# ---------------------------------------------------------------------------


def test_enclose_bridge_of_a_virtual_cut_vertex():
    # Pipe p hangs three edges into A; the triangle on a, b, c hangs off virtual:p.
    inst = two_atoms(
        [("a", "b"), ("b", "c"), ("c", "a"), ("d", "f"), ("f", "g"), ("g", "d")],
        [],
        [("a", "x"), ("b", "x"), ("d", "y"), ("f", "y")],
    )
    g = local(inst, "A")
    assert classify_shape(g).kind is not ShapeKind.CYCLE
    edges = [e for e in g.edges() if ordinary("a") in g.ends(e) or ordinary("b") in g.ends(e) or ordinary("c") in g.ends(e)]
    out = enclose_raw(inst, "A", [virtual("p")], edges)
    fresh_atoms = [a for a in out.atoms if a not in inst.atoms]
    assert len(fresh_atoms) == 1
    assert out.vertices["a"] == fresh_atoms[0]
    assert oracle_decide(out) == oracle_decide(inst)


def test_enclose_two_edge_cut_creates_degree_two_pipe_then_hook_suppresses():
    k4a = [(f"a{i}", f"a{j}") for i in range(4) for j in range(i + 1, 4)]
    k4b = [(f"b{i}", f"b{j}") for i in range(4) for j in range(i + 1, 4)]
    inst = single_atom(k4a + k4b + [("a0", "b0"), ("a1", "b1")])
    g = local(inst, "A")
    cut = [ordinary("a0"), ordinary("a1")]
    part = [e for e in g.edges() if "b" in g.ends(e)[0].ref + g.ends(e)[1].ref]
    raw = enclose_raw(inst, "A", cut, part)
    new_pipe = next(p for p in raw.pipes if p not in inst.pipes)
    assert raw.pipe_degree(new_pipe) == 2
    hooked = enclose(inst, "A", cut, part)
    assert all(hooked.pipe_degree(p) >= 3 for p in hooked.pipes)
    assert len(hooked.atoms) == 2


def test_enclose_rejects_non_bridges():
    inst = single_atom(K4)
    with pytest.raises(OperationError):
        enclose_raw(inst, "A", [ordinary("a")], ["e0"])


# ---------------------------------------------------------------------------
# Stretch
# ---------------------------------------------------------------------------


def test_stretch_ordinary_vertex_of_degree_five():
    inst = single_atom(fan("u", ["v1", "v2", "v3", "v4", "v5"]))
    g = local(inst, "A")
    moved = g.incident(ordinary("u"))[:3]
    out = stretch_raw(inst, "A", ordinary("u"), moved)
    h = local(out, "A")
    twin = next(v for v in out.vertices if v not in inst.vertices)
    assert h.degree(ordinary("u")) == 3
    assert h.degree(ordinary(twin)) == 4
    assert h.number_of_edges() == 6


def test_stretch_virtual_vertex_adds_pipe_and_two_cycle():
    inst = two_atoms([], [], [("a", "x"), ("b", "x"), ("c", "x"), ("d", "x")])
    out = stretch_raw(inst, "A", virtual("p"), ["e0", "e1"])
    assert len(out.pipes) == 2
    new_vertices = [v for v in out.vertices if v not in inst.vertices]
    assert sorted(out.vertices[v] for v in new_vertices) == ["A", "B"]
    cycle = out.G.induced_subgraph(new_vertices)
    assert cycle.number_of_edges() == 2


def test_stretch_needs_proper_subset():
    inst = single_atom(fan("u", ["v1", "v2", "v3"]))
    with pytest.raises(OperationError):
        stretch_raw(inst, "A", ordinary("u"), ["e0", "e1", "e2"])
    with pytest.raises(OperationError):
        stretch_raw(inst, "A", ordinary("u"), [])


# ---------------------------------------------------------------------------
# Contract
# ---------------------------------------------------------------------------


def test_contract_ppath_into_neighbour():
    # A: p-path between virtual:p (pole) and ordinary hub h; B: triangle whose
    # corners all reach p, so virtual:p completes a K4
    inst = Instance(
        ["A", "B"],
        {"p": ("A", "B")},
        {"h": "A", "m0": "A", "m1": "A", "m2": "A", "x": "B", "y": "B", "z": "B"},
        {
            "h0": ("h", "m0", None), "h1": ("h", "m1", None), "h2": ("h", "m2", None),
            "c0": ("m0", "x", "p"), "c1": ("m1", "y", "p"), "c2": ("m2", "z", "p"),
            "k0": ("x", "y", None), "k1": ("y", "z", None), "k2": ("z", "x", None),
        },
    )
    assert contract_preconditions(inst, "p") is None
    out = contract(inst, "p")
    assert len(out.atoms) == 1
    merged = local(out, out.atoms[0])
    assert classify_shape(merged).kind is ShapeKind.SUBDIVIDED_3CONNECTED
    assert oracle_decide(out) is True


def test_contract_refuses_rigid_sides():
    inst = two_atoms(K4, [("x", "y"), ("y", "z"), ("z", "x"), ("w", "x"), ("w", "y"), ("w", "z")], [("a", "x"), ("b", "y"), ("c", "z")])
    assert contract_preconditions(inst, "p") is not None
    with pytest.raises(OperationError):
        contract(inst, "p")


# ---------------------------------------------------------------------------
# Delete
# ---------------------------------------------------------------------------


def test_delete_inner_cut_edge_disconnects_local_graph():
    inst = single_atom(cycle_pairs(["a", "b", "c"]) + [("c", "x")] + cycle_pairs(["x", "y", "z"]))
    out = delete_raw(inst, "A", "e3")
    assert "e3" not in out.edges
    assert len(normalize(out).atoms) == 2


def test_delete_edge_into_a_pipe():
    triangles = cycle_pairs(["a", "b", "c"]) + cycle_pairs(["d", "f", "g"])
    inst = two_atoms(triangles, cycle_pairs(["x", "y", "z"]), [("a", "x"), ("d", "y"), ("f", "z")])
    g = local(inst, "A")
    assert g.max_degree() <= 3
    out = delete_raw(inst, "A", "e9")
    assert "p" not in out.pipes
    assert "e9" not in out.edges
    assert oracle_decide(out) == oracle_decide(inst)


def test_delete_needs_cut_edge_in_subcubic_graph():
    with pytest.raises(OperationError):
        delete_raw(single_atom(K4), "A", "e0")
    with pytest.raises(OperationError):
        delete_raw(single_atom(fan("u", ["a", "b", "c", "d"])), "A", "e0")


# ---------------------------------------------------------------------------
# Rewriter, hooks and traces
# ---------------------------------------------------------------------------


def test_hooks_restore_normality():
    inst = two_atoms([("a", "b")], [("x", "y")], [("a", "x"), ("b", "y")])
    assert not inst.is_normal()
    assert normalize(inst).is_normal()


def test_trace_replays_to_the_same_instance():
    inst = two_atoms([("a", "b")], [("x", "y")], [("a", "x"), ("b", "y")])
    rw = Rewriter(inst)
    rw.apply("stretch", atom="A", vertex=ordinary("a"), edges=["e0"])
    text = rw.trace.to_jsonl()
    again = replay(inst, RewriteTrace.from_jsonl(text))
    assert again == rw.instance
    assert any(entry.auto for entry in rw.trace.entries)


def test_inputs_are_never_modified():
    inst = two_atoms([("a", "b")], [("x", "y")], [("a", "x")])
    before = inst.to_json()
    suppress_raw(inst, "p")
    normalize(inst)
    assert inst.to_json() == before
