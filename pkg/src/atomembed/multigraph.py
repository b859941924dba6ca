"""Loopless multigraphs with stable ids, plus the cut and shape predicates
used by the rewrite algorithm.

Identifiers are opaque but must be mutually comparable within one graph;
every query that enumerates vertices, edges, cuts or bridges does so in
ascending id order so results are reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Any, Hashable, Iterable

VertexId = Hashable
EdgeId = Hashable


class GraphError(ValueError):
    """Raised when a graph violates a precondition of a query."""


class Multigraph:
    """Undirected multigraph with explicitly named edges.

    Loops are rejected unless ``allow_loops`` is set; the only place loops
    are legitimate is the degree-2-suppressed graph, where a cycle hanging
    off a vertex collapses to a loop.
    """

    __slots__ = ("_ends", "_inc", "allow_loops")

    def __init__(
        self,
        vertices: Iterable[VertexId] = (),
        edges: Iterable[tuple[EdgeId, VertexId, VertexId]] = (),
        *,
        allow_loops: bool = False,
    ) -> None:
        self._ends: dict[EdgeId, tuple[VertexId, VertexId]] = {}
        self._inc: dict[VertexId, dict[EdgeId, None]] = {}
        self.allow_loops = allow_loops
        for v in vertices:
            self.add_vertex(v)
        for e, u, v in edges:
            self.add_edge(e, u, v)

    # -- mutation (used while building; queries never mutate their input) --

    def add_vertex(self, v: VertexId) -> None:
        self._inc.setdefault(v, {})

    def add_edge(self, e: EdgeId, u: VertexId, v: VertexId) -> None:
        if e in self._ends:
            raise GraphError(f"duplicate edge id {e!r}")
        if u == v and not self.allow_loops:
            raise GraphError(f"loop {e!r} at {u!r} in a loopless multigraph")
        self.add_vertex(u)
        self.add_vertex(v)
        self._ends[e] = (u, v)
        self._inc[u][e] = None
        self._inc[v][e] = None

    def remove_edge(self, e: EdgeId) -> None:
        u, v = self._ends.pop(e)
        self._inc[u].pop(e, None)
        self._inc[v].pop(e, None)

    def remove_vertex(self, v: VertexId) -> None:
        for e in list(self._inc[v]):
            self.remove_edge(e)
        del self._inc[v]

    # -- queries --

    def vertices(self) -> list[VertexId]:
        return sorted(self._inc)

    def edges(self) -> list[EdgeId]:
        return sorted(self._ends)

    def has_vertex(self, v: VertexId) -> bool:
        return v in self._inc

    def has_edge(self, e: EdgeId) -> bool:
        return e in self._ends

    def ends(self, e: EdgeId) -> tuple[VertexId, VertexId]:
        return self._ends[e]

    def other_end(self, e: EdgeId, v: VertexId) -> VertexId:
        a, b = self._ends[e]
        if a == v:
            return b
        if b == v:
            return a
        raise GraphError(f"edge {e!r} is not incident to {v!r}")

    def incident(self, v: VertexId) -> list[EdgeId]:
        return sorted(self._inc[v])

    def degree(self, v: VertexId) -> int:
        return sum(2 if self._ends[e][0] == self._ends[e][1] else 1 for e in self._inc[v])

    def max_degree(self) -> int:
        return max((self.degree(v) for v in self._inc), default=0)

    def neighbors(self, v: VertexId) -> list[VertexId]:
        return sorted({self.other_end(e, v) for e in self._inc[v]})

    def number_of_vertices(self) -> int:
        return len(self._inc)

    def number_of_edges(self) -> int:
        return len(self._ends)

    def __contains__(self, v: object) -> bool:
        return v in self._inc

    def __len__(self) -> int:
        return len(self._inc)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multigraph):
            return NotImplemented
        return set(self._inc) == set(other._inc) and {
            e: frozenset(ends) for e, ends in self._ends.items()
        } == {e: frozenset(ends) for e, ends in other._ends.items()}

    def __repr__(self) -> str:
        return f"Multigraph(|V|={len(self._inc)}, |E|={len(self._ends)})"

    def copy(self) -> Multigraph:
        g = Multigraph(allow_loops=self.allow_loops)
        g._inc = {v: dict(inc) for v, inc in self._inc.items()}
        g._ends = dict(self._ends)
        return g

    def edge_subgraph(self, edges: Iterable[EdgeId], vertices: Iterable[VertexId] = ()) -> Multigraph:
        g = Multigraph(vertices, allow_loops=self.allow_loops)
        for e in sorted(edges):
            u, v = self._ends[e]
            g.add_edge(e, u, v)
        return g

    def induced_subgraph(self, vertices: Iterable[VertexId]) -> Multigraph:
        keep = set(vertices)
        g = Multigraph(sorted(keep), allow_loops=self.allow_loops)
        for e, (u, v) in sorted(self._ends.items()):
            if u in keep and v in keep:
                g.add_edge(e, u, v)
        return g

    def components(
        self,
        removed_vertices: Iterable[VertexId] = (),
        removed_edges: Iterable[EdgeId] = (),
    ) -> list[list[VertexId]]:
        """Vertex sets of connected components, each sorted, ordered by least vertex."""
        gone_v = set(removed_vertices)
        gone_e = set(removed_edges)
        seen: set[VertexId] = set()
        out = []
        for s in sorted(self._inc):
            if s in seen or s in gone_v:
                continue
            comp = [s]
            seen.add(s)
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for e in self._inc[x]:
                    if e in gone_e:
                        continue
                    y = self.other_end(e, x)
                    if y not in seen and y not in gone_v:
                        seen.add(y)
                        comp.append(y)
                        queue.append(y)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1


# ---------------------------------------------------------------------------
# Degree-2 suppression
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuppressedPath:
    """The subdivided path of the original graph behind one suppressed edge."""

    vertices: tuple[VertexId, ...]
    edges: tuple[EdgeId, ...]


def is_cycle(g: Multigraph) -> bool:
    if g.number_of_edges() == 0 or not g.is_connected():
        return False
    return all(g.degree(v) == 2 for v in g.vertices())


def _require_connected_noncycle(g: Multigraph) -> None:
    if not g.is_connected():
        raise GraphError("graph must be connected")
    if is_cycle(g):
        raise GraphError("graph must not be a cycle")


def suppressed_graph(g: Multigraph) -> tuple[Multigraph, dict[EdgeId, SuppressedPath]]:
    """Suppress every degree-2 vertex of a connected non-cycle graph.

    Each edge of the result is named after the least edge id on its path and
    maps to that path.  A cycle hanging from a single vertex becomes a loop.
    """
    _require_connected_noncycle(g)
    branch = {v for v in g.vertices() if g.degree(v) != 2}
    out = Multigraph(sorted(branch), allow_loops=True)
    paths: dict[EdgeId, SuppressedPath] = {}
    used: set[EdgeId] = set()
    for start in sorted(branch):
        for first in g.incident(start):
            if first in used:
                continue
            walk_v = [start]
            walk_e = []
            cur, edge = start, first
            while True:
                walk_e.append(edge)
                used.add(edge)
                nxt = g.other_end(edge, cur)
                walk_v.append(nxt)
                if nxt in branch:
                    break
                a, b = g.incident(nxt)
                edge = b if a == edge else a
                cur = nxt
            name = min(walk_e)
            out.add_edge(name, walk_v[0], walk_v[-1])
            paths[name] = SuppressedPath(tuple(walk_v), tuple(walk_e))
    return out, paths


# ---------------------------------------------------------------------------
# Bridges of a vertex cut
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BridgePart:
    """A bridge described by its non-cut vertices and its edge set."""

    interior: frozenset
    edges: frozenset

    def degree_at(self, g: Multigraph, v: VertexId) -> int:
        total = 0
        for e in self.edges:
            a, b = g.ends(e)
            total += (a == v) + (b == v)
        return total

    def is_single_edge(self) -> bool:
        return not self.interior and len(self.edges) == 1


def _sort_key(part: BridgePart) -> tuple:
    if part.edges:
        return (0, min(part.edges))
    return (1, min(part.interior))


def bridge_parts(g: Multigraph, cut: Iterable[VertexId]) -> list[BridgePart]:
    cut_set = set(cut)
    missing = cut_set - set(g.vertices())
    if missing:
        raise GraphError(f"cut vertices not in graph: {sorted(missing)!r}")
    parts = []
    for comp in g.components(removed_vertices=cut_set):
        members = set(comp)
        edges = set()
        for x in comp:
            edges.update(g.incident(x))
        parts.append(BridgePart(frozenset(members), frozenset(edges)))
    for e in g.edges():
        a, b = g.ends(e)
        if a in cut_set and b in cut_set:
            parts.append(BridgePart(frozenset(), frozenset([e])))
    parts.sort(key=_sort_key)
    return parts


def bridges(g: Multigraph, cut: Iterable[VertexId]) -> list[Multigraph]:
    """All ``cut``-bridges of ``g`` as subgraphs that include the whole cut."""
    cut_list = sorted(set(cut))
    return [
        g.edge_subgraph(p.edges, vertices=list(cut_list) + sorted(p.interior))
        for p in bridge_parts(g, cut_list)
    ]


# ---------------------------------------------------------------------------
# Proper cuts (defined on the suppressed graph, lifted back)
# ---------------------------------------------------------------------------


def _suppressed_or_none(g: Multigraph):
    if is_cycle(g):
        return None
    _require_connected_noncycle(g)
    return suppressed_graph(g)


def proper_cut_vertices(g: Multigraph) -> set:
    sup = _suppressed_or_none(g)
    if sup is None:
        return set()
    gm, _ = sup
    return {v for v in gm.vertices() if len(bridge_parts(gm, [v])) >= 2}


def _is_proper_pair(gm: Multigraph, u: VertexId, v: VertexId) -> bool:
    parts = bridge_parts(gm, [u, v])
    if len(parts) >= 3:
        return True
    return len(parts) == 2 and not any(p.is_single_edge() for p in parts)


def proper_two_cuts(g: Multigraph) -> list[tuple]:
    """Sorted list of proper 2-cuts ``(u, v)`` with ``u < v``."""
    sup = _suppressed_or_none(g)
    if sup is None:
        return []
    gm, _ = sup
    return [(u, v) for u, v in combinations(gm.vertices(), 2) if _is_proper_pair(gm, u, v)]


def proper_two_cut_members(g: Multigraph) -> set:
    return {x for pair in proper_two_cuts(g) for x in pair}


def proper_two_edge_cuts(g: Multigraph) -> list[tuple]:
    """Sorted list of proper 2-edge-cuts ``(e, f)`` of ``g`` with ``e < f``."""
    sup = _suppressed_or_none(g)
    if sup is None:
        return []
    gm, paths = sup
    base = len(gm.components())
    candidates = [
        e for e in gm.edges() if gm.ends(e)[0] != gm.ends(e)[1]
        and len(gm.components(removed_edges=[e])) == base
    ]

    def anchored(name: EdgeId) -> list[EdgeId]:
        path = paths[name]
        ends = {path.edges[0], path.edges[-1]}
        return sorted(
            e for e in ends if any(g.degree(x) >= 3 for x in g.ends(e))
        )

    found = set()
    for a, b in combinations(candidates, 2):
        if len(gm.components(removed_edges=[a, b])) == base:
            continue
        for e in anchored(a):
            for f in anchored(b):
                found.add((min(e, f), max(e, f)))
    return sorted(found)


def cut_edges(g: Multigraph) -> list[EdgeId]:
    """Edges whose removal increases the number of components."""
    base = len(g.components())
    return [e for e in g.edges() if len(g.components(removed_edges=[e])) > base]


def is_separable_bridge(g: Multigraph, cut: Iterable[VertexId], bridge: Multigraph | BridgePart) -> bool:
    u, v = sorted(set(cut))
    edges = frozenset(bridge.edges) if isinstance(bridge, BridgePart) else frozenset(bridge.edges())
    part = next((p for p in bridge_parts(g, [u, v]) if p.edges == edges), None)
    if part is None:
        raise GraphError("not a bridge of the given cut")

    def ok(x: VertexId) -> bool:
        return part.degree_at(g, x) in (1, g.degree(x) - 1)

    return ok(u) and ok(v)


def is_three_connected(g: Multigraph) -> bool:
    """Simple, at least four vertices, and no separating pair."""
    if g.number_of_vertices() < 4 or not g.is_connected():
        return False
    seen = set()
    for e in g.edges():
        a, b = g.ends(e)
        key = frozenset((a, b))
        if a == b or key in seen:
            return False
        seen.add(key)
    vs = g.vertices()
    return all(len(g.components(removed_vertices=[a, b])) == 1 for a, b in combinations(vs, 2))


# ---------------------------------------------------------------------------
# Shapes
# ---------------------------------------------------------------------------


class ShapeKind(Enum):
    CYCLE = "cycle"
    PPATH = "p-path"
    PSTAR = "p-star"
    SUBDIVIDED_3CONNECTED = "subdivided-3-connected"
    OTHER = "other"


@dataclass(frozen=True)
class Shape:
    kind: ShapeKind
    poles: tuple = ()
    center: Any = None

    def __str__(self) -> str:
        if self.kind is ShapeKind.PPATH:
            return f"p-path{self.poles}"
        if self.kind is ShapeKind.PSTAR:
            return f"p-star({self.center!r})"
        return self.kind.value


def _is_arm(gm: Multigraph, center: VertexId, part: BridgePart) -> bool:
    # A lone loop at the center lifts to a cycle through it: a p-path with two
    # subdivided edges.  Otherwise the bridge is a bundle of parallel edges to a
    # single far pole.
    if not part.interior:
        (e,) = part.edges
        a, b = gm.ends(e)
        return a == b == center
    if len(part.interior) != 1:
        return False
    (far,) = part.interior
    return all(set(gm.ends(e)) == {center, far} for e in part.edges)


def pstar_center(gm: Multigraph) -> VertexId | None:
    """Center of a p-star given its suppressed graph, or ``None``."""
    centers = [v for v in gm.vertices() if len(bridge_parts(gm, [v])) >= 2]
    if len(centers) != 1:
        return None
    c = centers[0]
    return c if all(_is_arm(gm, c, p) for p in bridge_parts(gm, [c])) else None


def classify_shape(g: Multigraph) -> Shape:
    if not g.is_connected():
        raise GraphError("graph must be connected")
    if is_cycle(g):
        return Shape(ShapeKind.CYCLE)
    if g.number_of_edges() == 0:
        return Shape(ShapeKind.OTHER)
    gm, _ = suppressed_graph(g)
    vs = gm.vertices()
    if len(vs) == 2 and all(gm.ends(e)[0] != gm.ends(e)[1] for e in gm.edges()):
        return Shape(ShapeKind.PPATH, poles=tuple(vs))
    c = pstar_center(gm)
    if c is not None:
        return Shape(ShapeKind.PSTAR, center=c)
    if is_three_connected(gm):
        return Shape(ShapeKind.SUBDIVIDED_3CONNECTED)
    return Shape(ShapeKind.OTHER)

