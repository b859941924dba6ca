"""Instances of atomic embeddability: a simplicial map from G onto a host graph H.

The vertices and edges of H are called atoms and pipes.  Every vertex of G
sits on an atom; every edge of G either stays inside one atom or runs
through one pipe joining the atoms of its ends.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, NamedTuple

from .multigraph import (
    Multigraph,
    ShapeKind,
    classify_shape,
    is_cycle,
    proper_cut_vertices,
    proper_two_cut_members,
)


class InstanceFormatError(ValueError):
    """The JSON document does not follow the instance schema."""


class InvalidInstance(ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.code} [{self.subject}]: {self.message}"


class LocalVertex(NamedTuple):
    """Vertex of a local graph: ordinary (``kind == "o"``, ``ref`` a vertex of G)
    or virtual (``kind == "v"``, ``ref`` a pipe)."""

    kind: str
    ref: str

    @property
    def is_virtual(self) -> bool:
        return self.kind == "v"

    def __str__(self) -> str:
        return f"{'virtual' if self.is_virtual else 'vertex'}:{self.ref}"


def ordinary(v: str) -> LocalVertex:
    return LocalVertex("o", v)


def virtual(p: str) -> LocalVertex:
    return LocalVertex("v", p)


@dataclass(frozen=True)
class LocalGraph:
    """The graph seen from one atom.  Local edge ids equal the ids of the
    edges of G they stand for, so the edge correspondence is the identity on
    ids."""

    atom: str
    graph: Multigraph

    def virtual_vertices(self) -> list[LocalVertex]:
        return [v for v in self.graph.vertices() if v.is_virtual]

    def ordinary_vertices(self) -> list[LocalVertex]:
        return [v for v in self.graph.vertices() if not v.is_virtual]

    def original(self, e: str) -> str:
        return e


@dataclass(frozen=True)
class PotentialReport:
    phi: int
    n: int
    n_ge3: int
    classes: Mapping[tuple[str, LocalVertex], tuple[int, int]] = field(repr=False)


class Instance:
    """Immutable instance.  Derived structures are cached on first use."""

    __slots__ = ("atoms", "pipes", "vertices", "edges", "counter", "_cache")

    def __init__(
        self,
        atoms: Iterable[str],
        pipes: Mapping[str, tuple[str, str]],
        vertices: Mapping[str, str],
        edges: Mapping[str, tuple[str, str, str | None]],
        counter: int = 0,
    ) -> None:
        self.atoms: tuple[str, ...] = tuple(sorted(atoms))
        self.pipes: dict[str, tuple[str, str]] = dict(pipes)
        self.vertices: dict[str, str] = dict(vertices)
        self.edges: dict[str, tuple[str, str, str | None]] = dict(edges)
        self.counter = counter
        self._cache: dict[Any, Any] = {}

    # -- basic views --

    @property
    def G(self) -> Multigraph:
        if "G" not in self._cache:
            self._cache["G"] = Multigraph(
                sorted(self.vertices), ((e, u, v) for e, (u, v, _) in sorted(self.edges.items())), allow_loops=True
            )
        return self._cache["G"]

    @property
    def H(self) -> Multigraph:
        if "H" not in self._cache:
            self._cache["H"] = Multigraph(
                self.atoms, ((p, a, b) for p, (a, b) in sorted(self.pipes.items())), allow_loops=True
            )
        return self._cache["H"]

    def vertex_map(self, v: str) -> str:
        return self.vertices[v]

    def edge_pipe(self, e: str) -> str | None:
        return self.edges[e][2]

    def edge_map(self, e: str) -> tuple[str, str]:
        """``("pipe", id)`` or ``("atom", id)``."""
        u, _, p = self.edges[e]
        return ("pipe", p) if p is not None else ("atom", self.vertices[u])

    def _index(self) -> tuple[dict, dict, dict]:
        if "index" not in self._cache:
            fiber: dict[str, list[str]] = {a: [] for a in self.atoms}
            touching: dict[str, list[str]] = {a: [] for a in self.atoms}
            carried: dict[str, list[str]] = {p: [] for p in self.pipes}
            for v, a in sorted(self.vertices.items()):
                fiber.setdefault(a, []).append(v)
            for e, (u, v, p) in sorted(self.edges.items()):
                au, av = self.vertices.get(u), self.vertices.get(v)
                touching.setdefault(au, []).append(e)
                if av != au:
                    touching.setdefault(av, []).append(e)
                if p is not None:
                    carried.setdefault(p, []).append(e)
            self._cache["index"] = (fiber, touching, carried)
        return self._cache["index"]

    def fiber(self, atom: str) -> list[str]:
        return list(self._index()[0].get(atom, []))

    def pipe_edges(self, p: str) -> list[str]:
        return list(self._index()[2].get(p, []))

    def pipe_degree(self, p: str) -> int:
        return len(self._index()[2].get(p, []))

    def pipes_at(self, atom: str) -> list[str]:
        return self.H.incident(atom)

    def pipes_between(self, a: str, b: str) -> list[str]:
        return [p for p in self.pipes_at(a) if set(self.pipes[p]) == {a, b}]

    def other_atom(self, p: str, atom: str) -> str:
        a, b = self.pipes[p]
        return b if a == atom else a

    def size(self) -> int:
        return len(self.vertices) + len(self.edges) + len(self.atoms) + len(self.pipes)

    # -- local graphs --

    def local_graph(self, atom: str) -> LocalGraph:
        key = ("local", atom)
        if key not in self._cache:
            fiber, touching, _ = self._index()
            g = Multigraph()
            for v in fiber.get(atom, []):
                g.add_vertex(ordinary(v))
            for p in self.pipes_at(atom):
                g.add_vertex(virtual(p))
            for e in touching.get(atom, []):
                u, v, p = self.edges[e]
                if p is None:
                    g.add_edge(e, ordinary(u), ordinary(v))
                else:
                    inside = u if self.vertices[u] == atom else v
                    g.add_edge(e, ordinary(inside), virtual(p))
            self._cache[key] = LocalGraph(atom, g)
        return self._cache[key]

    def local_graphs(self) -> list[LocalGraph]:
        return [self.local_graph(a) for a in self.atoms]

    # -- structure of H --

    def h_components(self) -> list[list[str]]:
        return self.H.components()

    def is_normal(self) -> bool:
        for lg in self.local_graphs():
            # An atom whose local graph is empty counts as disconnected; Split drops it.
            if len(lg.graph.components()) != 1:
                return False
            if any(lg.graph.degree(v) < 3 for v in lg.virtual_vertices()):
                return False
        return True

    def toroidal_components(self) -> list[frozenset]:
        if "toroidal" in self._cache:
            return self._cache["toroidal"]
        out = []
        for comp in self.h_components():
            if self._is_toroidal_component(comp):
                out.append(frozenset(comp))
        self._cache["toroidal"] = out
        return out

    def _is_toroidal_component(self, comp: list[str]) -> bool:
        if len(comp) < 2:
            return False
        sub = self.H.induced_subgraph(comp)
        if not is_cycle(sub):
            return False
        for a in comp:
            lg = self.local_graph(a).graph
            if not lg.is_connected() or lg.number_of_vertices() == 0:
                return False
            shape = classify_shape(lg)
            if shape.kind is not ShapeKind.PPATH:
                return False
            if set(shape.poles) != {virtual(p) for p in self.pipes_at(a)}:
                return False
        return True

    def star_atoms(self) -> list[str]:
        """Atoms outside toroidal components."""
        tor = set().union(*self.toroidal_components()) if self.toroidal_components() else set()
        return [a for a in self.atoms if a not in tor]

    def star_pipes(self) -> list[str]:
        keep = set(self.star_atoms())
        return [p for p in sorted(self.pipes) if self.pipes[p][0] in keep]

    def delta(self) -> int:
        star = self.star_atoms()
        if not star:
            return 2
        return max(self.local_graph(a).graph.max_degree() for a in star)

    def potential(self) -> PotentialReport:
        if "potential" in self._cache:
            return self._cache["potential"]
        phi = 0
        n = 0
        n3 = 0
        classes = {}
        for lg in self.local_graphs():
            g = lg.graph
            for comp in g.components():
                sub = g.induced_subgraph(comp)
                cuts = proper_cut_vertices(sub)
                members = proper_two_cut_members(sub)
                for v in comp:
                    d = g.degree(v)
                    n += 1
                    n3 += d >= 3
                    if v in cuts:
                        xi, sigma = 2, 3
                    elif v in members:
                        xi, sigma = 2, 2
                    else:
                        xi, sigma = 3, 1
                    classes[(lg.atom, v)] = (xi, sigma)
                    phi += max(0, d - xi) ** sigma
        rep = PotentialReport(phi, n, n3, classes)
        self._cache["potential"] = rep
        return rep

    def restrict(self, atoms: Iterable[str]) -> Instance:
        keep = set(atoms)
        vs = {v: a for v, a in self.vertices.items() if a in keep}
        es = {e: t for e, t in self.edges.items() if t[0] in vs and t[1] in vs}
        ps = {p: ends for p, ends in self.pipes.items() if ends[0] in keep and ends[1] in keep}
        return Instance(keep, ps, vs, es, self.counter)

    # -- equality and serialization --

    def key(self) -> tuple:
        return (
            self.atoms,
            tuple(sorted(self.pipes.items())),
            tuple(sorted(self.vertices.items())),
            tuple(sorted((e, t) for e, t in self.edges.items())),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Instance) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return (
            f"Instance(atoms={len(self.atoms)}, pipes={len(self.pipes)}, "
            f"vertices={len(self.vertices)}, edges={len(self.edges)})"
        )

    def to_dict(self) -> dict:
        return {
            "H": {
                "atoms": list(self.atoms),
                "pipes": [{"id": p, "ends": list(self.pipes[p])} for p in sorted(self.pipes)],
            },
            "G": {
                "vertices": [{"id": v, "atom": self.vertices[v]} for v in sorted(self.vertices)],
                "edges": [
                    {"id": e, "ends": [self.edges[e][0], self.edges[e][1]], "pipe": self.edges[e][2]}
                    for e in sorted(self.edges)
                ],
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc: Any) -> Instance:
        return _parse_instance(doc)

    @classmethod
    def from_json(cls, text: str) -> Instance:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(f"not valid JSON: {exc}") from exc
        return _parse_instance(doc)


# ---------------------------------------------------------------------------
# Parsing and validation
# ---------------------------------------------------------------------------


def _expect_keys(obj: Any, keys: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise InstanceFormatError(f"{where}: expected an object")
    if set(obj) != keys:
        extra = sorted(set(obj) - keys)
        missing = sorted(keys - set(obj))
        raise InstanceFormatError(f"{where}: unknown fields {extra}, missing fields {missing}")


def _expect_str(x: Any, where: str) -> str:
    if not isinstance(x, str):
        raise InstanceFormatError(f"{where}: expected a string")
    return x


def _expect_list(x: Any, where: str) -> list:
    if not isinstance(x, list):
        raise InstanceFormatError(f"{where}: expected a list")
    return x


def _expect_pair(x: Any, where: str) -> tuple[str, str]:
    x = _expect_list(x, where)
    if len(x) != 2:
        raise InstanceFormatError(f"{where}: expected exactly two ends")
    return _expect_str(x[0], where), _expect_str(x[1], where)


def parse_host(doc: Any, where: str = "H") -> tuple[list[str], dict[str, tuple[str, str]]]:
    _expect_keys(doc, {"atoms", "pipes"}, where)
    atoms = [_expect_str(a, f"{where}.atoms") for a in _expect_list(doc["atoms"], f"{where}.atoms")]
    if len(set(atoms)) != len(atoms):
        raise InstanceFormatError(f"{where}.atoms: duplicate atom id")
    pipes: dict[str, tuple[str, str]] = {}
    for i, p in enumerate(_expect_list(doc["pipes"], f"{where}.pipes")):
        _expect_keys(p, {"id", "ends"}, f"{where}.pipes[{i}]")
        pid = _expect_str(p["id"], f"{where}.pipes[{i}].id")
        if pid in pipes:
            raise InstanceFormatError(f"{where}.pipes: duplicate pipe id {pid!r}")
        pipes[pid] = _expect_pair(p["ends"], f"{where}.pipes[{i}].ends")
    return atoms, pipes


def _parse_instance(doc: Any) -> Instance:
    _expect_keys(doc, {"H", "G"}, "instance")
    atoms, pipes = parse_host(doc["H"])
    _expect_keys(doc["G"], {"vertices", "edges"}, "G")
    vertices: dict[str, str] = {}
    for i, v in enumerate(_expect_list(doc["G"]["vertices"], "G.vertices")):
        _expect_keys(v, {"id", "atom"}, f"G.vertices[{i}]")
        vid = _expect_str(v["id"], f"G.vertices[{i}].id")
        if vid in vertices:
            raise InstanceFormatError(f"G.vertices: duplicate vertex id {vid!r}")
        vertices[vid] = _expect_str(v["atom"], f"G.vertices[{i}].atom")
    edges: dict[str, tuple[str, str, str | None]] = {}
    for i, e in enumerate(_expect_list(doc["G"]["edges"], "G.edges")):
        _expect_keys(e, {"id", "ends", "pipe"}, f"G.edges[{i}]")
        eid = _expect_str(e["id"], f"G.edges[{i}].id")
        if eid in edges:
            raise InstanceFormatError(f"G.edges: duplicate edge id {eid!r}")
        u, v = _expect_pair(e["ends"], f"G.edges[{i}].ends")
        p = e["pipe"]
        if p is not None:
            p = _expect_str(p, f"G.edges[{i}].pipe")
        edges[eid] = (u, v, p)
    return Instance(atoms, pipes, vertices, edges)


def validate(inst: Instance) -> list[Violation]:
    """All violations of the instance invariants; empty when well formed."""
    out: list[Violation] = []
    atoms = set(inst.atoms)
    for p, (a, b) in sorted(inst.pipes.items()):
        if a == b:
            out.append(Violation("loopless", p, "pipe joins an atom to itself"))
        for x in (a, b):
            if x not in atoms:
                out.append(Violation("unknown-atom", p, f"pipe end {x!r} is not an atom"))
    for v, a in sorted(inst.vertices.items()):
        if a not in atoms:
            out.append(Violation("unknown-atom", v, f"vertex mapped to unknown atom {a!r}"))
    for e, (u, v, p) in sorted(inst.edges.items()):
        if u == v:
            out.append(Violation("loopless", e, "edge of G is a loop"))
            continue
        missing = [x for x in (u, v) if x not in inst.vertices]
        if missing:
            out.append(Violation("unknown-vertex", e, f"edge end(s) {missing!r} are not vertices"))
            continue
        au, av = inst.vertices[u], inst.vertices[v]
        if au == av:
            if p is not None:
                out.append(Violation("edge-must-map-to-atom", e, "both ends share an atom, so the pipe must be null"))
        elif p is None:
            out.append(Violation("edge-must-map-to-pipe", e, "edge between atoms must map to a pipe"))
        elif p not in inst.pipes:
            out.append(Violation("unknown-pipe", e, f"pipe {p!r} does not exist"))
        elif set(inst.pipes[p]) != {au, av}:
            out.append(Violation("pipe-mismatch", e, f"pipe {p!r} does not join atoms {au!r} and {av!r}"))
    return out


def require_valid(inst: Instance) -> Instance:
    problems = validate(inst)
    if problems:
        raise InvalidInstance(problems)
    return inst


def load_instance(text: str) -> Instance:
    return require_valid(Instance.from_json(text))
