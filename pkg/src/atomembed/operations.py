"""Equivalence-preserving rewrites of instances.

Every operation takes an :class:`Instance` and returns a new one; inputs are
never modified.  The ``*_raw`` functions perform exactly one rewrite.  The
:class:`Rewriter` applies them, records a replayable trace and afterwards
restores normality with the automatic hooks: pipes carrying at most two edges
are suppressed, then atoms with disconnected local graphs are split, until
neither applies.

Ids of surviving objects are kept; new objects get fresh ids from the
instance's counter.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

from .instance import Instance, LocalVertex, ordinary, virtual
from .multigraph import ShapeKind, bridge_parts, classify_shape, cut_edges


class OperationError(ValueError):
    """An operation was called outside its precondition."""


# ---------------------------------------------------------------------------
# Mutable working copy
# ---------------------------------------------------------------------------

_PREFIX = {"atom": "a~", "pipe": "p~", "vertex": "v~", "edge": "e~"}


class _Draft:
    def __init__(self, inst: Instance) -> None:
        self.atoms = set(inst.atoms)
        self.pipes = dict(inst.pipes)
        self.vertices = dict(inst.vertices)
        self.edges = dict(inst.edges)
        self.counter = inst.counter

    def _taken(self, kind: str):
        return {"atom": self.atoms, "pipe": self.pipes, "vertex": self.vertices, "edge": self.edges}[kind]

    def fresh(self, kind: str) -> str:
        taken = self._taken(kind)
        while True:
            self.counter += 1
            name = f"{_PREFIX[kind]}{self.counter}"
            if name not in taken:
                return name

    def new_atom(self) -> str:
        a = self.fresh("atom")
        self.atoms.add(a)
        return a

    def new_pipe(self, a: str, b: str) -> str:
        p = self.fresh("pipe")
        self.pipes[p] = (a, b)
        return p

    def new_vertex(self, atom: str) -> str:
        v = self.fresh("vertex")
        self.vertices[v] = atom
        return v

    def new_edge(self, u: str, v: str, pipe: str | None) -> str:
        e = self.fresh("edge")
        self.edges[e] = (u, v, pipe)
        return e

    def reroute_pipe(self, p: str, old: str, new: str) -> None:
        a, b = self.pipes[p]
        self.pipes[p] = (new if a == old else a, new if b == old else b)

    def pipe_for(self, u: str, v: str, fallback: str | None) -> str | None:
        return None if self.vertices[u] == self.vertices[v] else fallback

    def carried(self, p: str) -> list[str]:
        return sorted(e for e, (_, _, q) in self.edges.items() if q == p)

    def freeze(self) -> Instance:
        return Instance(self.atoms, self.pipes, self.vertices, self.edges, self.counter)


def _as_local(x: Any) -> LocalVertex:
    if isinstance(x, LocalVertex):
        return x
    kind, ref = x
    return LocalVertex(kind, ref)


def _suppress_in(d: _Draft, p: str) -> dict[str, str]:
    """Remove pipe ``p`` from the draft; returns the new vertex created on each side, keyed by atom."""
    carried = d.carried(p)
    if len(carried) > 2:
        raise OperationError(f"pipe {p!r} carries {len(carried)} edges; suppress needs at most 2")
    a, b = d.pipes.pop(p)
    if not carried:
        return {}
    ends = {a: [], b: []}
    for e in carried:
        u, v, _ = d.edges.pop(e)
        ends[d.vertices[u]].append(u)
        ends[d.vertices[v]].append(v)
    made = {}
    for atom in (a, b):
        hub = d.new_vertex(atom)
        made[atom] = hub
        for x in ends[atom]:
            d.new_edge(x, hub, None)
    return made


# ---------------------------------------------------------------------------
# The seven rewrites
# ---------------------------------------------------------------------------


def suppress_raw(inst: Instance, pipe: str) -> Instance:
    if pipe not in inst.pipes:
        raise OperationError(f"unknown pipe {pipe!r}")
    d = _Draft(inst)
    _suppress_in(d, pipe)
    return d.freeze()


def split_raw(inst: Instance, atom: str) -> Instance:
    if atom not in inst.atoms:
        raise OperationError(f"unknown atom {atom!r}")
    comps = inst.local_graph(atom).graph.components()
    if len(comps) == 1:
        raise OperationError(f"local graph of {atom!r} is connected")
    d = _Draft(inst)
    d.atoms.discard(atom)
    for comp in comps:
        part = d.new_atom()
        for lv in comp:
            if lv.is_virtual:
                d.reroute_pipe(lv.ref, atom, part)
            else:
                d.vertices[lv.ref] = part
    return d.freeze()


def detach_raw(inst: Instance, vertex: str) -> Instance:
    if vertex not in inst.vertices:
        raise OperationError(f"unknown vertex {vertex!r}")
    atom = inst.vertices[vertex]
    g = inst.local_graph(atom).graph
    lv = ordinary(vertex)
    if g.degree(lv) == 0 or not g.is_connected():
        raise OperationError("detach needs a vertex of positive degree in a connected local graph")
    shape = classify_shape(g)
    ok = (shape.kind is ShapeKind.PSTAR and shape.center == lv) or (
        shape.kind is ShapeKind.PPATH and lv in shape.poles
    )
    if not ok:
        raise OperationError(f"{vertex!r} is neither a p-star center nor a p-path pole")
    d = _Draft(inst)
    for e in inst.G.incident(vertex):
        u, w, p = d.edges[e]
        leaf = d.new_vertex(atom)
        d.edges[e] = (leaf if u == vertex else u, leaf if w == vertex else w, p)
    del d.vertices[vertex]
    return d.freeze()


def enclose_raw(inst: Instance, atom: str, cut: Iterable, edges: Iterable[str]) -> Instance:
    """Move one bridge of ``cut`` in the local graph of ``atom`` into a new atom.

    The bridge is named by its edge set.  A bridge made of a single edge
    between two cut vertices is rejected: it has no interior to move.
    """
    if atom not in inst.atoms:
        raise OperationError(f"unknown atom {atom!r}")
    g = inst.local_graph(atom).graph
    cut_set = {_as_local(x) for x in cut}
    if not cut_set or any(x not in g for x in cut_set):
        raise OperationError("cut must be a nonempty set of vertices of the local graph")
    wanted = frozenset(edges)
    part = next((b for b in bridge_parts(g, cut_set) if b.edges == wanted), None)
    if part is None:
        raise OperationError("edge set is not a bridge of the given cut")
    if part.is_single_edge():
        raise OperationError("a single-edge bridge cannot be enclosed")

    d = _Draft(inst)
    inner = d.new_atom()
    link = d.new_pipe(atom, inner)
    for lv in sorted(part.interior):
        if lv.is_virtual:
            d.reroute_pipe(lv.ref, atom, inner)
        else:
            d.vertices[lv.ref] = inner
    touched: list[str] = []
    for e in sorted(part.edges):
        a, b = g.ends(e)
        if a in cut_set or b in cut_set:
            boundary, far = (a, b) if a in cut_set else (b, a)
            if boundary.is_virtual or far.is_virtual:
                u, v, p = d.edges.pop(e)
                mid = d.new_vertex(atom if boundary.is_virtual else inner)
                touched.append(d.new_edge(u, mid, p))
                touched.append(d.new_edge(mid, v, p))
                continue
        touched.append(e)
    for e in touched:
        u, v, p = d.edges[e]
        au, av = d.vertices[u], d.vertices[v]
        if au == av:
            p = None
        elif {au, av} == {atom, inner}:
            p = link
        d.edges[e] = (u, v, p)
    return d.freeze()


def stretch_raw(inst: Instance, atom: str, vertex, edges: Iterable[str]) -> Instance:
    if atom not in inst.atoms:
        raise OperationError(f"unknown atom {atom!r}")
    g = inst.local_graph(atom).graph
    u = _as_local(vertex)
    if u not in g:
        raise OperationError(f"{u} is not in the local graph of {atom!r}")
    moved = sorted(set(edges))
    incident = set(g.incident(u))
    if not moved or len(moved) >= len(incident) or not set(moved) <= incident:
        raise OperationError("stretch needs a nonempty proper subset of the incident edges")
    d = _Draft(inst)
    if not u.is_virtual:
        twin = d.new_vertex(atom)
        d.new_edge(u.ref, twin, None)
        for e in moved:
            a, b, p = d.edges[e]
            d.edges[e] = (twin if a == u.ref else a, twin if b == u.ref else b, p)
    else:
        far = inst.other_atom(u.ref, atom)
        twin = d.new_pipe(atom, far)
        for e in moved:
            a, b, _ = d.edges[e]
            d.edges[e] = (a, b, twin)
        near_v, far_v = d.new_vertex(atom), d.new_vertex(far)
        d.new_edge(near_v, far_v, u.ref)
        d.new_edge(near_v, far_v, twin)
    return d.freeze()


def contract_preconditions(inst: Instance, pipe: str) -> str | None:
    """Reason why ``pipe`` may not be contracted, or ``None`` when it may."""
    a, b = inst.pipes[pipe]
    if len(inst.pipes_between(a, b)) != 1:
        return "multiple pipes between the two atoms"
    end = virtual(pipe)
    ga, gb = inst.local_graph(a).graph, inst.local_graph(b).graph
    if not (ga.is_connected() and gb.is_connected()):
        return "disconnected local graph"
    if ga.degree(end) != ga.max_degree() or gb.degree(end) != gb.max_degree():
        return "pipe end is not of maximum degree"
    sa, sb = classify_shape(ga), classify_shape(gb)
    if sa.kind is ShapeKind.PSTAR and sb.kind is ShapeKind.PSTAR and sa.center == end == sb.center:
        return None
    for s in (sa, sb):
        if s.kind is ShapeKind.PPATH and end in s.poles:
            return None
    return "neither two p-stars centered at the pipe nor a p-path with a pole at the pipe"


def contract_raw(inst: Instance, pipe: str, check: bool = True) -> Instance:
    if pipe not in inst.pipes:
        raise OperationError(f"unknown pipe {pipe!r}")
    if check:
        reason = contract_preconditions(inst, pipe)
        if reason:
            raise OperationError(f"cannot contract {pipe!r}: {reason}")
    a, b = inst.pipes[pipe]
    d = _Draft(inst)
    merged = d.new_atom()
    del d.pipes[pipe]
    d.atoms -= {a, b}
    for v, x in inst.vertices.items():
        if x in (a, b):
            d.vertices[v] = merged
    for p in inst.pipes_at(a) + inst.pipes_at(b):
        if p in d.pipes:
            d.reroute_pipe(p, a, merged)
            d.reroute_pipe(p, b, merged)
    for e in inst.pipe_edges(pipe):
        u, v, _ = d.edges[e]
        d.edges[e] = (u, v, None)
    return d.freeze()


def delete_raw(inst: Instance, atom: str, edge: str) -> Instance:
    if atom not in inst.atoms:
        raise OperationError(f"unknown atom {atom!r}")
    g = inst.local_graph(atom).graph
    if not g.has_edge(edge):
        raise OperationError(f"{edge!r} is not an edge of the local graph of {atom!r}")
    if g.max_degree() > 3:
        raise OperationError("delete needs a subcubic local graph")
    if edge not in cut_edges(g):
        raise OperationError(f"{edge!r} is not a cut edge")
    x, y = g.ends(edge)
    d = _Draft(inst)
    u, w, p = d.edges.pop(edge)
    if not (x.is_virtual or y.is_virtual):
        return d.freeze()
    # The far end of the edge sits across the pipe; after suppressing the pipe
    # it is joined to the new vertex on the far side.
    far_atom = inst.other_atom(p, atom)
    far_end = u if inst.vertices[u] == far_atom else w
    made = _suppress_in(d, p)
    hub = made.get(far_atom) or d.new_vertex(far_atom)
    d.new_edge(hub, far_end, None)
    return d.freeze()


RAW_OPERATIONS: dict[str, Callable[..., Instance]] = {
    "suppress": suppress_raw,
    "split": split_raw,
    "detach": detach_raw,
    "enclose": enclose_raw,
    "stretch": stretch_raw,
    "contract": contract_raw,
    "delete": delete_raw,
}


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------


def _ids(inst: Instance) -> dict[str, set]:
    return {
        "atoms": set(inst.atoms),
        "pipes": set(inst.pipes),
        "vertices": set(inst.vertices),
        "edges": set(inst.edges),
    }


def _jsonable(value: Any) -> Any:
    if isinstance(value, LocalVertex):
        return [value.kind, value.ref]
    if isinstance(value, (set, frozenset)):
        return sorted((_jsonable(v) for v in value), key=json.dumps)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass
class TraceEntry:
    op: str
    params: dict
    created: dict
    destroyed: dict
    auto: bool = False

    def to_dict(self) -> dict:
        return {
            "op": self.op,
            "params": self.params,
            "created": self.created,
            "destroyed": self.destroyed,
            "auto": self.auto,
        }


@dataclass
class RewriteTrace:
    entries: list[TraceEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(e.to_dict(), sort_keys=True) + "\n" for e in self.entries)

    @classmethod
    def from_jsonl(cls, text: str) -> RewriteTrace:
        out = cls()
        for line in text.splitlines():
            if not line.strip():
                continue
            doc = json.loads(line)
            if "op" not in doc:
                continue
            out.entries.append(
                TraceEntry(doc["op"], doc["params"], doc["created"], doc["destroyed"], doc.get("auto", False))
            )
        return out


def replay(initial: Instance, trace: RewriteTrace) -> Instance:
    """Re-apply every recorded rewrite, hooks included, without re-running the hooks."""
    inst = initial
    for entry in trace.entries:
        inst = RAW_OPERATIONS[entry.op](inst, **entry.params)
    return inst


class Rewriter:
    """Applies rewrites to a current instance and records them."""

    def __init__(self, inst: Instance, hooks: bool = True) -> None:
        self.instance = inst
        self.trace = RewriteTrace()
        self.hooks = hooks
        self.op_count = 0

    def apply(self, op: str, **params: Any) -> Instance:
        self._apply(op, params, auto=False)
        if self.hooks:
            self.normalize()
        return self.instance

    def _apply(self, op: str, params: dict, auto: bool) -> None:
        params = {k: _jsonable(v) for k, v in params.items()}
        before = self.instance
        after = RAW_OPERATIONS[op](before, **params)
        old, new = _ids(before), _ids(after)
        self.trace.entries.append(
            TraceEntry(
                op,
                params,
                {k: sorted(new[k] - old[k]) for k in old},
                {k: sorted(old[k] - new[k]) for k in old},
                auto,
            )
        )
        self.instance = after
        self.op_count += 1

    def normalize(self) -> Instance:
        """Suppress light pipes, then split disconnected atoms, until neither applies."""
        while True:
            inst = self.instance
            light = [p for p in sorted(inst.pipes) if inst.pipe_degree(p) <= 2]
            if light:
                self._apply("suppress", {"pipe": light[0]}, auto=True)
                continue
            broken = [a for a in inst.atoms if len(inst.local_graph(a).graph.components()) != 1]
            if broken:
                self._apply("split", {"atom": broken[0]}, auto=True)
                continue
            return self.instance

    # Convenience wrappers with readable signatures.

    def suppress(self, pipe: str) -> Instance:
        return self.apply("suppress", pipe=pipe)

    def split(self, atom: str) -> Instance:
        return self.apply("split", atom=atom)

    def detach(self, vertex: str) -> Instance:
        return self.apply("detach", vertex=vertex)

    def enclose(self, atom: str, cut: Iterable, edges: Iterable[str]) -> Instance:
        return self.apply("enclose", atom=atom, cut=sorted(_as_local(x) for x in cut), edges=sorted(edges))

    def stretch(self, atom: str, vertex, edges: Iterable[str]) -> Instance:
        return self.apply("stretch", atom=atom, vertex=_as_local(vertex), edges=sorted(edges))

    def contract(self, pipe: str) -> Instance:
        return self.apply("contract", pipe=pipe)

    def delete(self, atom: str, edge: str) -> Instance:
        return self.apply("delete", atom=atom, edge=edge)


# ---------------------------------------------------------------------------
# One-shot functional API (hooks applied)
# ---------------------------------------------------------------------------


def normalize(inst: Instance) -> Instance:
    return Rewriter(inst).normalize()


def suppress(inst: Instance, pipe: str, hooks: bool = True) -> Instance:
    return Rewriter(inst, hooks).suppress(pipe)


def split(inst: Instance, atom: str, hooks: bool = True) -> Instance:
    return Rewriter(inst, hooks).split(atom)


def detach(inst: Instance, vertex: str, hooks: bool = True) -> Instance:
    return Rewriter(inst, hooks).detach(vertex)


def enclose(inst: Instance, atom: str, cut: Iterable, edges: Iterable[str], hooks: bool = True) -> Instance:
    return Rewriter(inst, hooks).enclose(atom, cut, edges)


def stretch(inst: Instance, atom: str, vertex, edges: Iterable[str], hooks: bool = True) -> Instance:
    return Rewriter(inst, hooks).stretch(atom, vertex, edges)


def contract(inst: Instance, pipe: str, hooks: bool = True) -> Instance:
    return Rewriter(inst, hooks).contract(pipe)


def delete(inst: Instance, atom: str, edge: str, hooks: bool = True) -> Instance:
    return Rewriter(inst, hooks).delete(atom, edge)
