from __future__ import annotations

import itertools

import pytest

from atomembed.instance import Instance
from atomembed.multigraph import Multigraph
from atomembed.reductions import Polyhedron


def graph(pairs, vertices=()):
    """Multigraph with edges named e0, e1, ... in the given order."""
    return Multigraph(vertices, ((f"e{i}", u, v) for i, (u, v) in enumerate(pairs)))


def complete(n, prefix="v"):
    names = [f"{prefix}{i}" for i in range(n)]
    return graph(itertools.combinations(names, 2))


def cycle_pairs(names):
    return [(names[i], names[(i + 1) % len(names)]) for i in range(len(names))]


def ppath(arms, lengths=None):
    """Poles u and w joined by ``arms`` internally disjoint paths."""
    lengths = lengths or [2] * arms
    pairs = []
    for i, k in enumerate(lengths):
        inner = [f"a{i}.{j}" for j in range(k - 1)]
        chain = ["u", *inner, "w"]
        pairs += list(zip(chain, chain[1:]))
    return graph(pairs)


def single_atom(pairs, atom="A"):
    names = sorted({x for pair in pairs for x in pair})
    return Instance(
        [atom],
        {},
        {v: atom for v in names},
        {f"e{i}": (u, v, None) for i, (u, v) in enumerate(pairs)},
    )


def two_atoms(inside_a, inside_b, crossing):
    """Atoms A and B joined by pipe p; ``crossing`` lists (u in A, v in B) edges."""
    verts = {}
    for pairs, atom in ((inside_a, "A"), (inside_b, "B")):
        for pair in pairs:
            for x in pair:
                verts[x] = atom
    for u, v in crossing:
        verts[u], verts[v] = "A", "B"
    edges = {}
    for u, v in [*inside_a, *inside_b]:
        edges[f"e{len(edges)}"] = (u, v, None)
    for u, v in crossing:
        edges[f"e{len(edges)}"] = (u, v, "p")
    return Instance(["A", "B"], {"p": ("A", "B")}, verts, edges)


def tetrahedron():
    g = complete(4)
    faces = [c for c in itertools.combinations(g.vertices(), 3)]
    return Polyhedron(g, [_triangle(g, f) for f in faces])


def k5_cone():
    """Apex joined to the five vertices of K5 with every apex triangle as a facet."""
    rim = [f"a{i}" for i in range(5)]
    pairs = list(itertools.combinations(rim, 2)) + [("x", a) for a in rim]
    g = graph(pairs)
    return Polyhedron(g, [_triangle(g, ("x", a, b)) for a, b in itertools.combinations(rim, 2)])


def _triangle(g, corners):
    def edge(a, b):
        return next(e for e in g.edges() if set(g.ends(e)) == {a, b})

    a, b, c = corners
    return (edge(a, b), edge(b, c), edge(c, a))


@pytest.fixture
def tetra():
    return tetrahedron()


@pytest.fixture
def cone():
    return k5_cone()


# ---------------------------------------------------------------------------
# acceptance report
# ---------------------------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
