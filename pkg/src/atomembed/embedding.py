"""Rotation systems, face tracing, planarity and exhaustive planar enumeration."""

from __future__ import annotations

import time
from enum import Enum
from itertools import permutations
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

import networkx as nx

from .multigraph import (
    GraphError,
    Multigraph,
    bridge_parts,
    proper_cut_vertices,
    proper_two_cut_members,
)

Dart = tuple  # (edge id, tail vertex)


class RotationOverflow(RuntimeError):
    """More candidates exist than the caller allowed for."""


def canonical_cycle(seq: Sequence) -> tuple:
    """Rotate a cyclic sequence so that its least element comes first."""
    if not seq:
        return ()
    i = min(range(len(seq)), key=seq.__getitem__)
    return tuple(seq[i:]) + tuple(seq[:i])


class RotationSystem:
    """Cyclic order of incident edges at every vertex.

    Rotations are stored canonically (least edge first) so equal systems
    compare and hash equal regardless of how they were written down.
    """

    __slots__ = ("_rot", "_succ")

    def __init__(self, rotations: Mapping[Hashable, Sequence]) -> None:
        self._rot = {v: canonical_cycle(list(r)) for v, r in rotations.items()}
        self._succ: dict | None = None

    def rotation(self, v: Hashable) -> tuple:
        return self._rot.get(v, ())

    def vertices(self) -> list:
        return sorted(self._rot)

    def items(self):
        return sorted(self._rot.items())

    def successor(self, v: Hashable, e: Hashable) -> Hashable:
        if self._succ is None:
            succ = {}
            for x, r in self._rot.items():
                for i, f in enumerate(r):
                    succ[(x, f)] = r[(i + 1) % len(r)]
            self._succ = succ
        return self._succ[(v, e)]

    def reversed(self) -> RotationSystem:
        return RotationSystem({v: tuple(reversed(r)) for v, r in self._rot.items()})

    def restrict(self, vertices: Iterable[Hashable]) -> RotationSystem:
        return RotationSystem({v: self._rot[v] for v in vertices if v in self._rot})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RotationSystem) and self._rot == other._rot

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._rot.items())))

    def __repr__(self) -> str:
        return f"RotationSystem({dict(self.items())!r})"


def check_rotation_system(g: Multigraph, rs: RotationSystem) -> None:
    for v in g.vertices():
        r = rs.rotation(v)
        if sorted(r) != g.incident(v) or len(set(r)) != len(r):
            raise GraphError(f"rotation at {v!r} does not list its incident edges exactly once")


# ---------------------------------------------------------------------------
# Faces and genus
# ---------------------------------------------------------------------------


def _darts(g: Multigraph) -> list[Dart]:
    out = []
    for e in g.edges():
        a, b = g.ends(e)
        out.append((e, a))
        out.append((e, b))
    return out


def trace_faces(g: Multigraph, rs: RotationSystem) -> list[tuple[Dart, ...]]:
    """Face boundary walks as sequences of darts ``(edge, tail)``.

    After traversing edge ``e`` into ``v`` the walk leaves ``v`` along the
    successor of ``e`` in the rotation at ``v``.
    """
    check_rotation_system(g, rs)
    seen: set[Dart] = set()
    faces = []
    for start in _darts(g):
        if start in seen:
            continue
        face = []
        d = start
        while d not in seen:
            seen.add(d)
            face.append(d)
            e, tail = d
            head = g.other_end(e, tail)
            d = (rs.successor(head, e), head)
        faces.append(tuple(face))
    return faces


def euler_genus(g: Multigraph, rs: RotationSystem) -> list[int]:
    """Genus of each connected component, in component order.

    Uses V - E + F = 2 - 2g per component; an isolated vertex bounds one face.
    """
    faces = trace_faces(g, rs)
    comp_of = {}
    comps = g.components()
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    nv = [len(c) for c in comps]
    ne = [0] * len(comps)
    nf = [0] * len(comps)
    for e in g.edges():
        ne[comp_of[g.ends(e)[0]]] += 1
    for face in faces:
        nf[comp_of[face[0][1]]] += 1
    for i in range(len(comps)):
        if ne[i] == 0:
            nf[i] = 1
    out = []
    for v_, e_, f_ in zip(nv, ne, nf):
        twice = 2 - v_ + e_ - f_
        assert twice >= 0 and twice % 2 == 0, "face tracing produced an impossible count"
        out.append(twice // 2)
    return out


def genus(g: Multigraph, rs: RotationSystem) -> int:
    return sum(euler_genus(g, rs))


# ---------------------------------------------------------------------------
# Planarity (delegated to networkx on the edge-subdivided simple graph)
# ---------------------------------------------------------------------------


def _subdivided_nx(g: Multigraph) -> nx.Graph:
    h = nx.Graph()
    for v in g.vertices():
        h.add_node(("v", v))
    for e in g.edges():
        a, b = g.ends(e)
        h.add_edge(("v", a), ("e", e))
        h.add_edge(("e", e), ("v", b))
    return h


def test_planarity(g: Multigraph) -> bool:
    planar, _ = nx.check_planarity(_subdivided_nx(g))
    return planar


test_planarity.__test__ = False  # keep pytest from collecting it


def planar_rotation_system(g: Multigraph) -> RotationSystem | None:
    """A genus-0 rotation system of ``g``, or ``None`` if ``g`` is nonplanar."""
    planar, emb = nx.check_planarity(_subdivided_nx(g))
    if not planar:
        return None
    rot = {}
    for v in g.vertices():
        if g.degree(v) == 0:
            rot[v] = ()
            continue
        rot[v] = tuple(node[1] for node in emb.neighbors_cw_order(("v", v)))
    rs = RotationSystem(rot)
    if genus(g, rs) != 0:  # pragma: no cover - guards a library contract
        raise AssertionError("planarity library returned a non-planar rotation system")
    return rs


# ---------------------------------------------------------------------------
# Exhaustive search over rotation systems
# ---------------------------------------------------------------------------


def vertex_rotations(g: Multigraph, v: Hashable) -> list[tuple]:
    """All cyclic orders at ``v``, least edge anchored, rest lexicographic."""
    inc = g.incident(v)
    if len(inc) <= 2:
        return [tuple(inc)]
    first, rest = inc[0], inc[1:]
    return [(first,) + p for p in permutations(rest)]


class _PlanarSearch:
    """Depth-first assignment of rotations with a face-count bound.

    A genus-0 system on a graph with ``V`` non-isolated vertices, ``E`` edges
    and ``C`` non-trivial components has exactly ``E - V + 2C`` faces.  At any
    partial assignment every unfinished face still contains a dart that enters
    an unassigned vertex, so ``closed + sum(deg of unassigned)`` bounds the
    final face count from above.
    """

    def __init__(self, g: Multigraph, order: Sequence[Hashable], deadline: float | None = None):
        self.g = g
        self.order = [v for v in order if g.degree(v) > 0]
        active = [c for c in g.components() if any(g.degree(v) > 0 for v in c)]
        n_active = sum(len(c) for c in active)
        self.target = g.number_of_edges() - n_active + 2 * len(active)
        self.choices = {v: vertex_rotations(g, v) for v in self.order}
        self.darts = _darts(g)
        self.head = {d: g.other_end(d[0], d[1]) for d in self.darts}
        self.deadline = deadline
        self.nodes = 0

    def _closed_faces(self, succ: dict) -> int:
        closed = 0
        seen: set = set()
        for start in self.darts:
            if start in seen:
                continue
            d = start
            path = []
            while d not in seen:
                seen.add(d)
                path.append(d)
                head = self.head[d]
                nxt = succ.get((head, d[0]))
                if nxt is None:
                    d = None
                    break
                d = (nxt, head)
            if d is not None and d == start:
                closed += 1
        return closed

    def _feasible(self, succ: dict, remaining_degree: int) -> bool:
        return self._closed_faces(succ) + remaining_degree >= self.target

    def run(self, fixed: Mapping[Hashable, tuple] | None = None, first_only: bool = False) -> Iterator[dict]:
        """Yield complete assignments (vertex -> rotation) of genus 0."""
        fixed = dict(fixed or {})
        order = [v for v in self.order if v not in fixed]
        succ: dict = {}
        assignment: dict = {}

        def place(v, rot):
            assignment[v] = rot
            for i, e in enumerate(rot):
                succ[(v, e)] = rot[(i + 1) % len(rot)]

        def unplace(v):
            rot = assignment.pop(v)
            for e in rot:
                del succ[(v, e)]

        remaining = sum(self.g.degree(v) for v in order)
        for v, rot in fixed.items():
            if self.g.degree(v) > 0:
                place(v, tuple(rot))
        if not self._feasible(succ, remaining):
            return

        def dfs(i: int, remaining: int):
            self.nodes += 1
            if self.deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self.deadline:
                raise RotationOverflow("time budget exhausted")
            if i == len(order):
                if self._closed_faces(succ) == self.target:
                    yield dict(assignment)
                return
            v = order[i]
            left = remaining - self.g.degree(v)
            for rot in self.choices[v]:
                place(v, rot)
                if self._feasible(succ, left):
                    yield from dfs(i + 1, left)
                unplace(v)

        for full in dfs(0, remaining):
            yield full
            if first_only:
                return


def enumerate_planar_rotation_systems(g: Multigraph, limit: int | None = None) -> Iterator[RotationSystem]:
    """Every genus-0 rotation system of ``g`` exactly once, in canonical order.

    Vertices are compared in ascending id order and each vertex's rotations in
    lexicographic order with its least edge anchored first.  If ``limit`` is
    given and more than ``limit`` systems exist, :class:`RotationOverflow` is
    raised after the first ``limit`` have been produced.
    """
    search = _PlanarSearch(g, g.vertices())
    isolated = {v: () for v in g.vertices() if g.degree(v) == 0}
    count = 0
    for assignment in search.run():
        if limit is not None and count >= limit:
            raise RotationOverflow(f"more than {limit} planar rotation systems")
        count += 1
        assignment.update(isolated)
        yield RotationSystem(assignment)


def search_order(g: Multigraph, focus: Sequence[Hashable]) -> list:
    # focus vertices first, then breadth-first outward so faces close early
    order = list(focus)
    seen = set(order)
    frontier = list(order)
    while True:
        if not frontier:
            rest = [v for v in g.vertices() if v not in seen]
            if not rest:
                return order
            seen.add(rest[0])
            order.append(rest[0])
            frontier = [rest[0]]
        nxt = []
        for v in frontier:
            for w in g.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    order.append(w)
                    nxt.append(w)
        frontier = nxt


def realizable_rotations(
    g: Multigraph,
    focus: Sequence[Hashable],
    limit: int | None = None,
    deadline: float | None = None,
) -> list[tuple]:
    """Tuples of rotations at ``focus`` that extend to a genus-0 system of ``g``.

    Returned in ascending order; raises :class:`RotationOverflow` when more
    than ``limit`` distinct tuples exist or the deadline passes.
    """
    focus = list(focus)
    order = search_order(g, focus)
    outer = _PlanarSearch(g, focus, deadline)
    inner = _PlanarSearch(g, order, deadline)
    found: list[tuple] = []
    # enumerate focus rotations with the bound, then ask for one completion
    focus_active = [v for v in focus if g.degree(v) > 0]
    remaining_total = sum(g.degree(v) for v in g.vertices())
    succ: dict = {}
    assignment: dict = {}

    def dfs(i: int, remaining: int):
        outer.nodes += 1
        if deadline is not None and outer.nodes % 256 == 0 and time.monotonic() > deadline:
            raise RotationOverflow("time budget exhausted")
        if i == len(focus_active):
            if next(inner.run(fixed=assignment, first_only=True), None) is not None:
                found.append(tuple(assignment.get(v, ()) for v in focus))
                if limit is not None and len(found) > limit:
                    raise RotationOverflow(f"more than {limit} realizable rotation tuples")
            return
        v = focus_active[i]
        left = remaining - g.degree(v)
        for rot in outer.choices[v]:
            assignment[v] = rot
            for k, e in enumerate(rot):
                succ[(v, e)] = rot[(k + 1) % len(rot)]
            if outer._feasible(succ, left):
                dfs(i + 1, left)
            for e in rot:
                del succ[(v, e)]
            del assignment[v]

    dfs(0, remaining_total)
    return sorted(found)


# ---------------------------------------------------------------------------
# Fixed rotations and compatibility
# ---------------------------------------------------------------------------


def _block_of(g: Multigraph, v: Hashable) -> Multigraph:
    """The block of ``g`` holding every edge at ``v``; ``v`` must not be a cut vertex."""
    h = g
    while True:
        for c in h.vertices():
            if c == v:
                continue
            parts = bridge_parts(h, [c])
            if len(parts) >= 2:
                first = h.incident(v)[0]
                keep = next(p for p in parts if first in p.edges)
                h = h.edge_subgraph(keep.edges)
                break
        else:
            return h


def is_fixed_rotation(g: Multigraph, v: Hashable) -> bool:
    """Conservative test: degree at most 2, or in no proper 1-cut of ``g`` and
    no proper 2-cut of its own block.

    Other blocks hang from cut vertices and can be flipped into any face, so
    they never change the rotation at ``v``.
    """
    if g.degree(v) <= 2:
        return True
    if not g.is_connected():
        raise GraphError("graph must be connected")
    if v in proper_cut_vertices(g):
        return False
    return v not in proper_two_cut_members(_block_of(g, v))


class Compatibility(Enum):
    SAME = "same"
    OPPOSITE = "opposite"
    INCOMPATIBLE = "incompatible"


def rotations_compatible(
    rot_u: Sequence, rot_v: Sequence, correspondence: Mapping | None = None
) -> Compatibility:
    """Compare two rotations after translating ``rot_u`` through ``correspondence``.

    When both readings hold (degree at most 2) the answer is ``OPPOSITE``,
    the relation the embedding condition actually asks for.
    """
    mapped = [correspondence[x] if correspondence is not None else x for x in rot_u]
    if sorted(mapped) != sorted(rot_v) or len(set(mapped)) != len(mapped):
        raise ValueError("rotations do not cover the same edges")
    target = canonical_cycle(list(rot_v))
    if canonical_cycle(list(reversed(mapped))) == target:
        return Compatibility.OPPOSITE
    if canonical_cycle(mapped) == target:
        return Compatibility.SAME
    return Compatibility.INCOMPATIBLE
