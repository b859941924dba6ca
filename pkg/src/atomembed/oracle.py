"""Exhaustive ground truth for small inputs.

An instance is positive exactly when every local graph has a plane rotation
system and, at every pipe, the two virtual vertices rotate in opposite
directions.  The search below first projects each local graph onto the
rotations its virtual vertices can take in some plane embedding, then looks
for a consistent choice across atoms.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .embedding import RotationOverflow, canonical_cycle, search_order, vertex_rotations
from .instance import Instance, virtual
from .multigraph import Multigraph
from .reductions import Polyhedron, link_graph


@dataclass(frozen=True)
class OracleLimits:
    max_rotations: int = 50_000
    max_combinations: int = 2_000_000
    time_budget: float = 60.0

    def __post_init__(self) -> None:
        if self.max_rotations <= 0 or self.max_combinations <= 0 or self.time_budget <= 0:
            raise ValueError("oracle limits must be positive")


@dataclass(frozen=True)
class Overflow:
    """The search gave up; carries no verdict."""

    reason: str

    def __bool__(self) -> bool:
        raise TypeError("Overflow has no truth value; test with isinstance")


# ---------------------------------------------------------------------------
# Joint search over a disjoint union of planar pieces
# ---------------------------------------------------------------------------


class _JointSearch:
    """Backtracking over rotations of every vertex of ``g`` (a disjoint union).

    ``partner[v] = (w, corr)`` ties the rotation at ``v`` to the one at ``w``:
    translated through ``corr`` (an edge map from ``w`` to ``v``) they must be
    opposite.  Whichever of the two is placed second has exactly one choice.
    Each component must end with ``E - V + 2`` faces, which gives the same
    pruning bound as the single-graph search, applied per component.
    """

    def __init__(self, g: Multigraph, order: list, partner: dict, limits: OracleLimits, deadline: float) -> None:
        self.g = g
        self.order = [v for v in order if g.degree(v) > 0]
        self.partner = partner
        self.limits = limits
        self.deadline = deadline
        self.choices = {v: vertex_rotations(g, v) for v in self.order}
        self.comp = {}
        self.target = []
        self.darts_of = []
        for i, c in enumerate(g.components()):
            for v in c:
                self.comp[v] = i
            n_edges = len({e for v in c for e in g.incident(v)})
            self.target.append(n_edges - len(c) + 2 if n_edges else 0)
            self.darts_of.append([(e, v) for v in c for e in g.incident(v)])
        self.head = {}
        for e in g.edges():
            a, b = g.ends(e)
            self.head[(e, a)] = b
            self.head[(e, b)] = a
        self.remaining = [0] * len(self.target)
        for v in self.order:
            self.remaining[self.comp[v]] += g.degree(v)
        self.succ: dict = {}
        self.assignment: dict = {}
        self.nodes = 0

    def _closed_faces(self, c: int) -> int:
        closed = 0
        seen: set = set()
        for start in self.darts_of[c]:
            if start in seen:
                continue
            d = start
            while d not in seen:
                seen.add(d)
                head = self.head[d]
                nxt = self.succ.get((head, d[0]))
                if nxt is None:
                    d = None
                    break
                d = (nxt, head)
            if d is not None and d == start:
                closed += 1
        return closed

    def _options(self, v) -> list[tuple]:
        tie = self.partner.get(v)
        if tie is None or tie[0] not in self.assignment:
            return self.choices[v]
        w, corr = tie
        mirrored = canonical_cycle([corr[x] for x in reversed(self.assignment[w])])
        return [mirrored] if sorted(mirrored) == self.g.incident(v) else []

    def run(self) -> bool:
        return self._dfs(0)

    def _dfs(self, i: int) -> bool:
        if i == len(self.order):
            return all(self._closed_faces(c) == t for c, t in enumerate(self.target))
        v = self.order[i]
        c = self.comp[v]
        deg = self.g.degree(v)
        self.remaining[c] -= deg
        try:
            for rot in self._options(v):
                self.nodes += 1
                if self.nodes > self.limits.max_combinations:
                    raise RotationOverflow("combination limit exceeded")
                if self.nodes % 1024 == 0 and time.monotonic() > self.deadline:
                    raise RotationOverflow("time budget exhausted")
                self.assignment[v] = rot
                for k, e in enumerate(rot):
                    self.succ[(v, e)] = rot[(k + 1) % len(rot)]
                if self._closed_faces(c) + self.remaining[c] >= self.target[c] and self._dfs(i + 1):
                    return True
                for e in rot:
                    del self.succ[(v, e)]
                del self.assignment[v]
            return False
        finally:
            self.remaining[c] += deg


def _run_joint(g, order, partner, limits, deadline) -> bool | Overflow:
    try:
        return _JointSearch(g, order, partner, limits, deadline).run()
    except RotationOverflow as exc:
        return Overflow(str(exc))


def _atom_order(inst: Instance) -> list[str]:
    # atoms in order of first appearance along ascending pipe ids
    order: list[str] = []
    for p in sorted(inst.pipes):
        for a in inst.pipes[p]:
            if a not in order:
                order.append(a)
    order.extend(a for a in inst.atoms if a not in order)
    return order


def collapse_parallel(inst: Instance) -> Instance:
    """Keep one edge from each class of edges with equal ends and equal pipe.

    Extra copies can always be drawn in a thin strip beside the kept edge, so
    the answer does not change.
    """
    kept: dict = {}
    for e in sorted(inst.edges):
        u, v, p = inst.edges[e]
        kept.setdefault((min(u, v), max(u, v), p), e)
    edges = {e: inst.edges[e] for e in kept.values()}
    return Instance(inst.atoms, inst.pipes, inst.vertices, edges, inst.counter)


def oracle_decide(inst: Instance, limits: OracleLimits | None = None) -> bool | Overflow:
    """Search all local graphs at once; a pipe's second virtual vertex is forced."""
    limits = limits or OracleLimits()
    inst = collapse_parallel(inst)
    deadline = time.monotonic() + limits.time_budget
    union = Multigraph()
    order = []
    for atom in _atom_order(inst):
        lg = inst.local_graph(atom).graph
        for v in lg.vertices():
            union.add_vertex((atom, v))
        for e in lg.edges():
            a, b = lg.ends(e)
            union.add_edge((atom, e), (atom, a), (atom, b))
        order.extend((atom, v) for v in search_order(lg, [x for x in lg.vertices() if x.is_virtual]))
    partner = {}
    for p, (a, b) in inst.pipes.items():
        end = virtual(p)
        partner[(a, end)] = ((b, end), {(b, e): (a, e) for e in inst.pipe_edges(p)})
        partner[(b, end)] = ((a, end), {(a, e): (b, e) for e in inst.pipe_edges(p)})
    return _run_joint(union, order, partner, limits, deadline)


def neuwirth_check(poly: Polyhedron, limits: OracleLimits | None = None) -> bool | Overflow:
    """Thickenability via compatible plane embeddings of all vertex links.

    Link vertex ``e`` at both ends of skeleton edge ``e`` must rotate in
    opposite directions, matched through the facets along ``e``.
    """
    limits = limits or OracleLimits()
    deadline = time.monotonic() + limits.time_budget
    g = poly.skeleton
    union = Multigraph()
    order = []
    for v in g.vertices():
        link = link_graph(poly, v)
        for x in link.vertices():
            union.add_vertex((v, x))
        for f in link.edges():
            a, b = link.ends(f)
            union.add_edge((v, f), (v, a), (v, b))
        order.extend((v, x) for x in search_order(link, []))
    partner = {}
    for e in g.edges():
        a, b = g.ends(e)
        facets_a = [f for (_, f) in union.incident((a, e))]
        partner[(a, e)] = ((b, e), {(b, f): (a, f) for f in facets_a})
        partner[(b, e)] = ((a, e), {(a, f): (b, f) for f in facets_a})
    return _run_joint(union, order, partner, limits, deadline)
