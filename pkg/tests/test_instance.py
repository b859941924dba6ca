from __future__ import annotations

import json

import pytest
from conftest import cycle_pairs, single_atom, two_atoms

from atomembed.generators import toroidal_instance
from atomembed.instance import (
    Instance,
    InstanceFormatError,
    InvalidInstance,
    load_instance,
    ordinary,
    require_valid,
    validate,
    virtual,
)

K4 = [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")]


def codes(inst):
    return {v.code for v in validate(inst)}


# ---------------------------------------------------------------------------
# validation and parsing
# ---------------------------------------------------------------------------


def test_cross_edge_needs_a_pipe():
    inst = Instance(["A", "B"], {"p": ("A", "B")}, {"u": "A", "v": "B"}, {"e": ("u", "v", None)})
    assert "edge-must-map-to-pipe" in codes(inst)


def test_host_loop_rejected():
    inst = Instance(["A"], {"p": ("A", "A")}, {"u": "A"}, {})
    assert "loopless" in codes(inst)


def test_pipe_must_join_the_right_atoms():
    inst = Instance(
        ["A", "B", "C"],
        {"p": ("A", "B"), "q": ("B", "C")},
        {"u": "A", "v": "B"},
        {"e": ("u", "v", "q")},
    )
    assert "pipe-mismatch" in codes(inst)


def test_single_edge_instance_is_valid():
    inst = two_atoms([], [], [("u", "v")])
    assert validate(inst) == []
    assert require_valid(inst) is inst


def test_require_valid_lists_every_problem():
    inst = Instance(["A"], {"p": ("A", "A")}, {"u": "A", "w": "Z"}, {"e": ("u", "x", None)})
    with pytest.raises(InvalidInstance) as info:
        require_valid(inst)
    assert len(info.value.violations) == 3


def test_json_round_trip_is_stable():
    inst = two_atoms(cycle_pairs(["a", "b", "c"]), [], [("a", "x"), ("b", "x")])
    text = inst.to_json()
    again = load_instance(text)
    assert again == inst
    assert again.to_json() == text


@pytest.mark.parametrize(
    "doc",
    [
        "not json",
        json.dumps({"H": {"atoms": [], "pipes": []}}),
        json.dumps({"H": {"atoms": ["A", "A"], "pipes": []}, "G": {"vertices": [], "edges": []}}),
        json.dumps({"H": {"atoms": ["A"], "pipes": []}, "G": {"vertices": [{"id": "u"}], "edges": []}}),
        json.dumps({"H": {"atoms": ["A"], "pipes": []}, "G": {"vertices": [], "edges": [], "extra": 1}}),
    ],
)
def test_malformed_documents(doc):
    with pytest.raises(InstanceFormatError):
        Instance.from_json(doc)


# ---------------------------------------------------------------------------
# local graphs
# ---------------------------------------------------------------------------


def test_local_graph_of_a_crossing_edge():
    inst = two_atoms([], [], [("u", "v")])
    lg = inst.local_graph("A").graph
    assert sorted(lg.vertices()) == [ordinary("u"), virtual("p")]
    assert lg.number_of_edges() == 1


def test_local_graph_of_an_inner_edge():
    inst = single_atom([("u", "v")])
    lg = inst.local_graph("A").graph
    assert set(lg.vertices()) == {ordinary("u"), ordinary("v")}
    assert not any(v.is_virtual for v in lg.vertices())


def test_local_graph_with_two_pipes():
    inst = Instance(
        ["M", "N", "K"],
        {"rho": ("N", "M"), "pi": ("N", "K")},
        {"a": "N", "b": "N", "x": "M", "y": "K"},
        {"e1": ("a", "b", None), "e2": ("a", "x", "rho"), "e3": ("b", "x", "rho"), "e4": ("b", "y", "pi")},
    )
    lg = inst.local_graph("N")
    assert lg.virtual_vertices() == [virtual("pi"), virtual("rho")]
    assert lg.graph.degree(virtual("rho")) == 2
    assert lg.graph.degree(virtual("pi")) == 1
    assert lg.original("e2") == "e2"


# ---------------------------------------------------------------------------
# normality, toroidal components, delta and potential
# ---------------------------------------------------------------------------


def test_two_edge_pipe_is_not_normal():
    inst = two_atoms([("a", "b")], [("x", "y")], [("a", "x"), ("b", "y")])
    assert not inst.is_normal()


def test_disconnected_local_graph_is_not_normal():
    inst = single_atom(cycle_pairs(["a", "b", "c"]) + cycle_pairs(["x", "y", "z"]))
    assert not inst.is_normal()


def test_three_edge_pipe_between_connected_sides_is_normal():
    inst = two_atoms([], [], [("a", "x"), ("a", "y"), ("a", "z")])
    assert inst.is_normal()


def test_toroidal_two_atom_cycle():
    inst = toroidal_instance([1, 1, 1], atoms=2)
    assert inst.toroidal_components() == [frozenset({"a0", "a1"})]
    assert inst.delta() == 2


def test_isolated_atom_and_path_are_not_toroidal():
    assert single_atom(K4).toroidal_components() == []
    assert two_atoms([], [], [("a", "x"), ("a", "y"), ("a", "z")]).toroidal_components() == []


def test_delta_of_k4_and_five_armed_star():
    assert single_atom(K4).delta() == 3
    pairs = []
    for arm in range(5):
        pairs += [("c", f"m{arm}"), (f"m{arm}", f"p{arm}")]
    assert single_atom(pairs).delta() == 5


def test_potential_of_a_degree_five_cut_vertex():
    pairs = cycle_pairs(["c", "a1", "a2"]) + cycle_pairs(["c", "b1", "b2"]) + [("c", "leaf")]
    rep = single_atom(pairs).potential()
    assert rep.classes[("A", ordinary("c"))] == (2, 3)
    assert rep.phi == 27


def test_potential_of_two_cut_members():
    pairs = [("u", f"m{i}") for i in range(5)] + [(f"m{i}", "w") for i in range(5)]
    rep = single_atom(pairs).potential()
    assert rep.classes[("A", ordinary("u"))] == (2, 2)
    assert rep.classes[("A", ordinary("m0"))] == (3, 1)
    assert rep.phi == 9 + 9
    assert rep.n == 7 and rep.n_ge3 == 2


def test_restrict_keeps_only_chosen_atoms():
    inst = two_atoms([("a", "b")], [("x", "y")], [("a", "x")])
    part = inst.restrict(["A"])
    assert part.atoms == ("A",)
    assert set(part.vertices) == {"a", "b"}
    assert set(part.edges) == {"e0"}
