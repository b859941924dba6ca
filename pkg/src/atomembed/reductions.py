"""Converters between atomic embeddability, clustered planarity and
2-polyhedron thickenability, plus vertex links of polyhedra."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from .instance import Instance, InstanceFormatError, parse_host
from .multigraph import Multigraph


class ReductionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Polyhedra
# ---------------------------------------------------------------------------


@dataclass
class Polyhedron:
    """A 1-skeleton ``skeleton`` with facets given as cyclic edge sequences.

    Facet ids are list positions.
    """

    skeleton: Multigraph
    facets: list[tuple[str, ...]] = field(default_factory=list)

    def facet_vertices(self, index: int) -> list[tuple[str, str, str]]:
        """``(vertex, incoming edge, outgoing edge)`` for each corner of a facet."""
        return _facet_corners(self.skeleton, self.facets[index])

    def validate(self) -> None:
        for i in range(len(self.facets)):
            self.facet_vertices(i)

    def to_dict(self) -> dict:
        g = self.skeleton
        return {
            "H": {
                "atoms": list(g.vertices()),
                "pipes": [{"id": e, "ends": list(g.ends(e))} for e in g.edges()],
            },
            "facets": [list(f) for f in self.facets],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc: Any) -> Polyhedron:
        if not isinstance(doc, dict) or set(doc) != {"H", "facets"}:
            raise InstanceFormatError("polyhedron: expected exactly the fields 'H' and 'facets'")
        atoms, pipes = parse_host(doc["H"])
        g = Multigraph(atoms)
        for p, (a, b) in sorted(pipes.items()):
            if a == b:
                raise ReductionError(f"skeleton edge {p!r} is a loop")
            if a not in g or b not in g:
                raise ReductionError(f"skeleton edge {p!r} has an unknown end")
            g.add_edge(p, a, b)
        if not isinstance(doc["facets"], list):
            raise InstanceFormatError("polyhedron: 'facets' must be a list")
        facets = []
        for f in doc["facets"]:
            if not isinstance(f, list) or not all(isinstance(x, str) for x in f):
                raise InstanceFormatError("polyhedron: each facet is a list of edge ids")
            facets.append(tuple(f))
        poly = cls(g, facets)
        poly.validate()
        return poly

    @classmethod
    def from_json(cls, text: str) -> Polyhedron:
        return cls.from_dict(json.loads(text))


def _facet_corners(g: Multigraph, facet: tuple[str, ...]) -> list[tuple[str, str, str]]:
    k = len(facet)
    if k < 2 or len(set(facet)) != k:
        raise ReductionError(f"facet {list(facet)!r} must use at least two distinct edges")
    for e in facet:
        if not g.has_edge(e):
            raise ReductionError(f"facet uses unknown edge {e!r}")
    if k == 2:
        a, b = facet
        if set(g.ends(a)) != set(g.ends(b)):
            raise ReductionError(f"bigon facet {list(facet)!r} needs two parallel edges")
        x, y = g.ends(a)
        return [(x, b, a), (y, a, b)]
    corners = []
    for i in range(k):
        prev, nxt = facet[i - 1], facet[i]
        shared = set(g.ends(prev)) & set(g.ends(nxt))
        if len(shared) != 1:
            raise ReductionError(f"facet {list(facet)!r} is not a closed walk")
        corners.append((shared.pop(), prev, nxt))
    seen = [c[0] for c in corners]
    if len(set(seen)) != k:
        raise ReductionError(f"facet {list(facet)!r} is not a cycle")
    return corners


def link_graph(poly: Polyhedron, v: str) -> Multigraph:
    """Link of ``v``: one vertex per skeleton edge at ``v``, one edge per facet corner at ``v``.

    Link edge ids are facet indices; a facet passes through ``v`` at most once.
    """
    g = poly.skeleton
    if v not in g:
        raise ReductionError(f"unknown vertex {v!r}")
    link = Multigraph(g.incident(v))
    for i in range(len(poly.facets)):
        for corner, a, b in poly.facet_vertices(i):
            if corner == v:
                link.add_edge(i, a, b)
    return link


# ---------------------------------------------------------------------------
# Atomic embeddability <-> thickenability
# ---------------------------------------------------------------------------


def _side(atom: str, k: int) -> str:
    return f"{atom}#{k}"


def to_thickenability(inst: Instance) -> Polyhedron:
    """Double the host graph; every edge of G becomes a facet.

    Vertex ``u`` of G gives the skeleton edge ``v:u`` between the two copies of
    its atom, pipe ``p`` gives ``p:p#0`` and ``p:p#1`` between matching copies.
    """
    g = Multigraph()
    for a in inst.atoms:
        g.add_vertex(_side(a, 0))
        g.add_vertex(_side(a, 1))
    for u in sorted(inst.vertices):
        a = inst.vertices[u]
        g.add_edge(f"v:{u}", _side(a, 0), _side(a, 1))
    for p in sorted(inst.pipes):
        a, b = inst.pipes[p]
        for k in (0, 1):
            g.add_edge(f"p:{p}#{k}", _side(a, k), _side(b, k))
    facets = []
    for e in sorted(inst.edges):
        u, v, p = inst.edges[e]
        if p is None:
            facets.append((f"v:{u}", f"v:{v}"))
        else:
            facets.append((f"p:{p}#0", f"v:{u}", f"p:{p}#1", f"v:{v}"))
    return Polyhedron(g, facets)


def from_thickenability(poly: Polyhedron) -> Instance:
    """One cycle of G per facet, lying over that facet."""
    g = poly.skeleton
    vertices: dict[str, str] = {}
    edges: dict[str, tuple[str, str, str | None]] = {}
    for i in range(len(poly.facets)):
        corners = poly.facet_vertices(i)
        name = {c[0]: f"f{i}.{c[0]}" for c in corners}
        for corner, _, _ in corners:
            vertices[name[corner]] = corner
        for e in poly.facets[i]:
            a, b = g.ends(e)
            edges[f"f{i}.{e}"] = (name[a], name[b], e)
    pipes = {e: g.ends(e) for e in g.edges()}
    return Instance(g.vertices(), pipes, vertices, edges)


# ---------------------------------------------------------------------------
# Clustered planarity
# ---------------------------------------------------------------------------


@dataclass
class ClusteredInstance:
    """Graph drawn in the plane across nested regions.

    ``tree`` maps each region to its parent (``None`` for the outer region);
    ``placement`` assigns every vertex to a region.
    """

    tree: dict[str, str | None]
    placement: dict[str, str]
    edges: list[tuple[str, str]]

    def validate(self) -> None:
        roots = [n for n, p in self.tree.items() if p is None]
        if len(roots) != 1:
            raise ReductionError("cluster tree needs exactly one root")
        for n, p in self.tree.items():
            if p is not None and p not in self.tree:
                raise ReductionError(f"region {n!r} has unknown parent {p!r}")
        for n in self.tree:
            seen = set()
            while n is not None:
                if n in seen:
                    raise ReductionError("cluster tree contains a cycle")
                seen.add(n)
                n = self.tree[n]
        for v, n in self.placement.items():
            if n not in self.tree:
                raise ReductionError(f"vertex {v!r} placed in unknown region {n!r}")
        pairs = set()
        for u, v in self.edges:
            if u == v:
                raise ReductionError(f"loop at {u!r}")
            if u not in self.placement or v not in self.placement:
                raise ReductionError(f"edge {u!r}-{v!r} has an unknown end")
            key = frozenset((u, v))
            if key in pairs:
                raise ReductionError(f"parallel edge {u!r}-{v!r}; the graph must be simple")
            pairs.add(key)

    def region_path(self, a: str, b: str) -> list[str]:
        up_a = self._ancestors(a)
        up_b = self._ancestors(b)
        common = next(x for x in up_a if x in set(up_b))
        left = up_a[: up_a.index(common) + 1]
        right = up_b[: up_b.index(common)]
        return left + right[::-1]

    def _ancestors(self, n: str) -> list[str]:
        out = []
        while n is not None:
            out.append(n)
            n = self.tree[n]
        return out

    def to_dict(self) -> dict:
        return {
            "tree": dict(sorted(self.tree.items())),
            "vertices": [{"id": v, "node": self.placement[v]} for v in sorted(self.placement)],
            "edges": [[u, v] for u, v in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc: Any) -> ClusteredInstance:
        if not isinstance(doc, dict) or set(doc) != {"tree", "vertices", "edges"}:
            raise InstanceFormatError("clustered instance: expected fields 'tree', 'vertices', 'edges'")
        tree = doc["tree"]
        if not isinstance(tree, dict):
            raise InstanceFormatError("clustered instance: 'tree' must be an object")
        placement = {}
        for item in doc["vertices"]:
            if not isinstance(item, dict) or set(item) != {"id", "node"}:
                raise InstanceFormatError("clustered instance: vertices need exactly 'id' and 'node'")
            if item["id"] in placement:
                raise InstanceFormatError(f"duplicate vertex id {item['id']!r}")
            placement[item["id"]] = item["node"]
        edges = []
        for item in doc["edges"]:
            if not isinstance(item, list) or len(item) != 2:
                raise InstanceFormatError("clustered instance: each edge is a pair of vertex ids")
            edges.append((item[0], item[1]))
        ci = cls(dict(tree), placement, edges)
        ci.validate()
        return ci

    @classmethod
    def from_json(cls, text: str) -> ClusteredInstance:
        return cls.from_dict(json.loads(text))


def _curve(region: str) -> str:
    return f"c:{region}"


def from_cplanarity(ci: ClusteredInstance) -> Instance:
    """Atoms are regions, pipes are the curves between a region and its parent.

    Edge ``i`` is subdivided once in every region its tree path passes
    through; each piece maps to the curve it crosses.
    """
    ci.validate()
    pipes: dict[str, tuple[str, str]] = {}
    for n, p in sorted(ci.tree.items()):
        if p is not None:
            pipes[_curve(n)] = (n, p)
    vertices = dict(ci.placement)
    edges: dict[str, tuple[str, str, str | None]] = {}
    for i, (u, v) in enumerate(ci.edges):
        path = ci.region_path(ci.placement[u], ci.placement[v])
        if len(path) == 1:
            edges[f"e{i}"] = (u, v, None)
            continue
        chain = [u]
        for j, region in enumerate(path[1:-1], start=1):
            w = f"e{i}~{j}"
            if w in vertices:
                raise ReductionError(f"vertex id {w!r} clashes with a subdivision vertex")
            vertices[w] = region
            chain.append(w)
        chain.append(v)
        for j in range(len(path) - 1):
            a, b = path[j], path[j + 1]
            crossing = _curve(a) if ci.tree.get(a) == b else _curve(b)
            edges[f"e{i}.{j}"] = (chain[j], chain[j + 1], crossing)
    return Instance(ci.tree.keys(), pipes, vertices, edges)


def cplanarity_from_shape(parents: list[int | None]) -> dict[str, str | None]:
    """Cluster tree from a parent-index list; entry ``k`` names region ``r{k}``."""
    tree: dict[str, str | None] = {}
    for k, p in enumerate(parents):
        tree[f"r{k}"] = None if p is None else f"r{p}"
    return tree


def load_any(doc: Mapping) -> str:
    """Classify a parsed JSON document: 'polyhedron', 'clustered' or 'instance'."""
    if "facets" in doc:
        return "polyhedron"
    if "tree" in doc:
        return "clustered"
    return "instance"
