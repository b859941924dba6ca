"""Seeded instance generators.

All generators draw from ``random.Random(seed)`` in a fixed order, so a seed
and a parameter set name one instance on every platform:

* ``random_instance``: each vertex ``v{i}`` picks an atom uniformly; then every
  vertex pair ``(i, j)`` with ``i < j``, in lexicographic order, is tried
  ``multiplicity`` times and each try adds an edge with probability
  ``density``.  An edge between different atoms reuses an
  existing pipe between them (uniform choice among the existing pipes plus one
  "new pipe" option), skipping pipes that already carry ``max_pipe_degree``
  edges.  If no pipe can take the edge, the edge is dropped.
* ``clustered_instance``: vertices pick a region uniformly, then edges are
  drawn as above.
* ``toroidal_instance``: deterministic, no randomness.
* ``random_subcubic_instance``, ``random_planar_instance`` and
  ``random_toroidal_instance``: see their docstrings.
"""

from __future__ import annotations

import random

import networkx as nx

from .instance import Instance
from .reductions import ClusteredInstance, cplanarity_from_shape


def random_instance(
    seed: int,
    vertices: int = 6,
    atoms: int = 3,
    density: float = 0.5,
    max_pipe_degree: int = 5,
    max_edges: int | None = None,
    multiplicity: int = 1,
) -> Instance:
    if vertices < 0 or atoms < 1 or not 0.0 <= density <= 1.0:
        raise ValueError("need vertices >= 0, atoms >= 1 and 0 <= density <= 1")
    rng = random.Random(seed)
    atom_ids = [f"a{k}" for k in range(atoms)]
    where = {f"v{i}": atom_ids[rng.randrange(atoms)] for i in range(vertices)}
    names = list(where)
    pipes: dict[str, tuple[str, str]] = {}
    load: dict[str, int] = {}
    edges: dict[str, tuple[str, str, str | None]] = {}
    pairs = [(i, j) for i in range(vertices) for j in range(i + 1, vertices) for _ in range(multiplicity)]
    for i, j in pairs:
        if rng.random() >= density:
            continue
        if max_edges is not None and len(edges) >= max_edges:
            break
        u, v = names[i], names[j]
        a, b = where[u], where[v]
        pipe = None
        if a != b:
            options = [p for p, ends in pipes.items() if set(ends) == {a, b} and load[p] < max_pipe_degree]
            options.append(None)
            pipe = options[rng.randrange(len(options))]
            if pipe is None:
                pipe = f"p{len(pipes)}"
                pipes[pipe] = (a, b)
                load[pipe] = 0
            load[pipe] += 1
        edges[f"e{len(edges)}"] = (u, v, pipe)
    return Instance(atom_ids, pipes, where, edges)


def toroidal_instance(windings, atoms: int = 3) -> Instance:
    """A cycle of ``atoms`` atoms; one cycle of G per winding number, wound that many times."""
    windings = list(windings)
    if atoms < 2 or not windings or any(w < 1 for w in windings):
        raise ValueError("need at least two atoms and positive winding numbers")
    atom_ids = [f"a{k}" for k in range(atoms)]
    pipes = {f"p{k}": (atom_ids[k], atom_ids[(k + 1) % atoms]) for k in range(atoms)}
    where: dict[str, str] = {}
    edges: dict[str, tuple[str, str, str | None]] = {}
    for c, w in enumerate(windings):
        length = w * atoms
        cycle = [f"c{c}.{j}" for j in range(length)]
        for j, x in enumerate(cycle):
            where[x] = atom_ids[j % atoms]
        for j in range(length):
            edges[f"c{c}.e{j}"] = (cycle[j], cycle[(j + 1) % length], f"p{j % atoms}")
    return Instance(atom_ids, pipes, where, edges)


def clustered_instance(seed: int, parents: list, vertices: int = 5, density: float = 0.5) -> ClusteredInstance:
    rng = random.Random(seed)
    tree = cplanarity_from_shape(parents)
    regions = sorted(tree)
    placement = {f"v{i}": regions[rng.randrange(len(regions))] for i in range(vertices)}
    edges = []
    for i in range(vertices):
        for j in range(i + 1, vertices):
            if rng.random() < density:
                edges.append((f"v{i}", f"v{j}"))
    return ClusteredInstance(tree, placement, edges)


def parse_shape(text: str) -> list:
    """``"_,0,0"`` means region 0 is the root and regions 1, 2 are its children.

    ``-`` is accepted as a root marker too, but on the command line it needs
    the ``--shape=-,0,0`` spelling.
    """
    out = []
    for token in text.split(","):
        token = token.strip()
        out.append(None if token in ("_", "-", "") else int(token))
    return out


def random_subcubic_instance(seed: int, vertices: int = 8, atoms: int = 3, planar: bool = False) -> Instance:
    """Random 3-regular G, atoms assigned uniformly, cross edges bundled into pipes.

    G comes from ``networkx.random_regular_graph(3, vertices, seed)``; with
    ``planar`` the seed is increased by one until G is planar.  For each
    pair of atoms the edges between them, in id order, are shuffled and cut
    into consecutive groups of three, one pipe per group, so every virtual
    vertex has degree at most 3.
    """
    if vertices < 4 or vertices % 2 or atoms < 1:
        raise ValueError("need an even number of at least 4 vertices and at least one atom")
    rng = random.Random(seed)
    base = nx.random_regular_graph(3, vertices, seed=seed)
    shift = 0
    while planar and not nx.check_planarity(base)[0]:
        shift += 1
        base = nx.random_regular_graph(3, vertices, seed=seed + shift)
    atom_ids = [f"a{k}" for k in range(atoms)]
    where = {f"v{i}": atom_ids[rng.randrange(atoms)] for i in sorted(base.nodes)}
    cross: dict[tuple[str, str], list[str]] = {}
    edges: dict[str, tuple[str, str, str | None]] = {}
    for k, (i, j) in enumerate(sorted(tuple(sorted(e)) for e in base.edges)):
        u, v = f"v{i}", f"v{j}"
        edges[f"e{k}"] = (u, v, None)
        a, b = sorted((where[u], where[v]))
        if a != b:
            cross.setdefault((a, b), []).append(f"e{k}")
    pipes: dict[str, tuple[str, str]] = {}
    for (a, b), group in sorted(cross.items()):
        rng.shuffle(group)
        for start in range(0, len(group), 3):
            p = f"p{len(pipes)}"
            pipes[p] = (a, b)
            for e in group[start : start + 3]:
                u, v, _ = edges[e]
                edges[e] = (u, v, p)
    return Instance(atom_ids, pipes, where, edges)


def random_toroidal_instance(seed: int, atoms: int = 3, cycles: int = 2, max_winding: int = 2) -> Instance:
    """``toroidal_instance`` with winding numbers drawn uniformly from 1..max_winding."""
    rng = random.Random(seed)
    return toroidal_instance([rng.randint(1, max_winding) for _ in range(cycles)], atoms=atoms)


def random_planar_instance(
    seed: int, vertices: int = 8, atoms: int = 3, keep: float = 0.8, max_pipe_degree: int = 5
) -> Instance:
    """Planar G from a stacked triangulation, thinned, then cut into atoms.

    Vertex ``k >= 3`` goes into a uniformly chosen face of the current
    triangulation and is joined to its corners; afterwards each edge survives
    with probability ``keep``.  Atoms are assigned uniformly; the cross edges of
    each atom pair, shuffled, are cut into groups of ``2..max_pipe_degree``
    edges, one pipe per group.
    """
    if vertices < 3 or atoms < 1 or max_pipe_degree < 2:
        raise ValueError("need at least three vertices, one atom and max_pipe_degree >= 2")
    rng = random.Random(seed)
    pairs = [(0, 1), (1, 2), (0, 2)]
    faces = [(0, 1, 2), (0, 1, 2)]
    for k in range(3, vertices):
        a, b, c = faces.pop(rng.randrange(len(faces)))
        faces.extend([(a, b, k), (b, c, k), (a, c, k)])
        pairs.extend([(a, k), (b, k), (c, k)])
    pairs = [pr for pr in pairs if rng.random() < keep]
    atom_ids = [f"a{k}" for k in range(atoms)]
    where = {f"v{i}": atom_ids[rng.randrange(atoms)] for i in range(vertices)}
    edges: dict[str, tuple[str, str, str | None]] = {}
    cross: dict[tuple[str, str], list[str]] = {}
    for k, (i, j) in enumerate(pairs):
        u, v = f"v{i}", f"v{j}"
        edges[f"e{k}"] = (u, v, None)
        a, b = sorted((where[u], where[v]))
        if a != b:
            cross.setdefault((a, b), []).append(f"e{k}")
    pipes: dict[str, tuple[str, str]] = {}
    for (a, b), group in sorted(cross.items()):
        rng.shuffle(group)
        start = 0
        while start < len(group):
            size = rng.randint(2, max_pipe_degree)
            p = f"p{len(pipes)}"
            pipes[p] = (a, b)
            for e in group[start : start + size]:
                u, v, _ = edges[e]
                edges[e] = (u, v, p)
            start += size
    return Instance(atom_ids, pipes, where, edges)
