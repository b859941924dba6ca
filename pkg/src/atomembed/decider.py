"""Polynomial-time decision procedure for atomic embeddability.

Outline: normalize, reject nonplanar local graphs, then lower the maximum
local degree Δ (outside toroidal components) one step at a time until every
remaining local graph is subcubic.  Toroidal components are settled by
comparing winding numbers, the rest by a 2-CNF formula over the two mirror
images of each local graph.

Every rewrite goes through a :class:`~atomembed.operations.Rewriter`, so a
decision carries a replayable trace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .embedding import Compatibility, is_fixed_rotation, planar_rotation_system, rotations_compatible, test_planarity
from .instance import Instance, LocalVertex, require_valid, virtual
from .multigraph import (
    ShapeKind,
    bridge_parts,
    classify_shape,
    cut_edges,
    is_cycle,
    is_separable_bridge,
    proper_cut_vertices,
    proper_two_cuts,
    proper_two_edge_cuts,
)
from .operations import RewriteTrace, Rewriter, replay
from .twosat import TwoSatFormula, solve


class InternalError(RuntimeError):
    """An invariant the algorithm relies on failed; this is a bug, not a verdict."""


class _Negative(Exception):
    def __init__(self, reason: dict) -> None:
        super().__init__(reason.get("kind"))
        self.reason = reason


@dataclass
class Decision:
    embeddable: bool
    reason: dict
    trace: RewriteTrace = field(repr=False)
    stats: dict = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return {"embeddable": self.embeddable, "reason": self.reason}

    def witness_jsonl(self) -> str:
        return self.trace.to_jsonl() + json.dumps({"terminal": self.reason}, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Small helpers
# ---------------------------------------------------------------------------


def _reference_rotation(inst: Instance, atom: str, lv: LocalVertex) -> tuple:
    rs = planar_rotation_system(inst.local_graph(atom).graph)
    if rs is None:
        raise _Negative({"kind": "nonplanar", "atom": atom})
    return rs.rotation(lv)


def _consecutive_block(rotation: tuple, count: int) -> list[str]:
    """``count`` cyclically consecutive edges starting at the least edge id."""
    start = rotation.index(min(rotation))
    k = len(rotation)
    return [rotation[(start + i) % k] for i in range(count)]


def _shape(inst: Instance, atom: str):
    g = inst.local_graph(atom).graph
    if not g.is_connected() or g.number_of_vertices() == 0:
        return None
    return classify_shape(g)


def _is_flexible(shape, lv: LocalVertex) -> bool:
    """``lv`` is a p-star center or a p-path pole of its local graph."""
    if shape is None:
        return False
    if shape.kind is ShapeKind.PSTAR:
        return shape.center == lv
    if shape.kind is ShapeKind.PPATH:
        return lv in shape.poles
    return False


def _has_fixed_rotation(inst: Instance, atom: str, lv: LocalVertex) -> bool:
    """Fixedness of a maximum-degree vertex in a nice instance.

    Such a vertex is either a p-star center, a p-path pole, or fixed.  The cut
    criterion is asserted so a niceness failure surfaces as an error.
    """
    flexible = _is_flexible(_shape(inst, atom), lv)
    if not flexible and not is_fixed_rotation(inst.local_graph(atom).graph, lv):
        raise InternalError(f"{lv} in atom {atom} has degree Δ but is neither fixed, a center nor a pole")
    return not flexible


def _atom_of(inst: Instance, lv: LocalVertex, edge: str, prefer: str) -> str:
    """The atom whose local graph has ``lv`` incident to G edge ``edge``.

    A pipe edge shows up on both sides of its pipe, so ``prefer`` is tried first.
    """
    u, v, _ = inst.edges[edge]
    candidates = sorted({inst.vertices[u], inst.vertices[v]})
    if prefer in candidates:
        candidates.remove(prefer)
        candidates.insert(0, prefer)
    for atom in candidates:
        g = inst.local_graph(atom).graph
        if lv in g and edge in g.incident(lv):
            return atom
    raise InternalError(f"no atom holds {lv} with edge {edge}")


def _splits_rotation(moved: int, degree: int) -> bool:
    # Stretching one edge, or all but one, only subdivides that edge.
    return 2 <= moved <= degree - 2


# ---------------------------------------------------------------------------
# The procedure
# ---------------------------------------------------------------------------


class Decider:
    def __init__(self, inst: Instance, audit: bool = True, max_steps: int | None = None) -> None:
        self.rw = Rewriter(require_valid(inst))
        self.audit = audit
        self.max_steps = max_steps or 200 + 40 * inst.size() ** 2
        self.steps = 0
        self.stats: dict[str, Any] = {"iterations": [], "enclose_2edge": []}

    # -- bookkeeping --

    @property
    def inst(self) -> Instance:
        return self.rw.instance

    def _tick(self) -> None:
        self.steps += 1
        if self.steps > self.max_steps:
            raise InternalError("step budget exhausted; the rewrite loop does not terminate")

    def _star_atoms(self) -> list[str]:
        return self.inst.star_atoms()

    def _require_planar(self, atoms) -> None:
        for a in sorted(set(atoms)):
            if a in self.inst.atoms and not test_planarity(self.inst.local_graph(a).graph):
                raise _Negative({"kind": "nonplanar", "atom": a})

    def _new_atoms_since(self, before: set) -> list[str]:
        return [a for a in self.inst.atoms if a not in before]

    # -- top level --

    def run(self) -> Decision:
        try:
            verdict = self._run()
            reason = {"kind": "positive"} if verdict else None
        except _Negative as neg:
            verdict, reason = False, neg.reason
        self.stats.setdefault("ops_main", self.rw.op_count - self.stats.get("ops_preprocess", 0))
        self.stats["ops_total"] = self.rw.op_count
        return Decision(verdict, reason, self.rw.trace, self.stats)

    def _run(self) -> bool:
        self.rw.normalize()
        start = self.inst
        pot = start.potential()
        self.stats.update(phi0=pot.phi, n_ge3_0=pot.n_ge3, ops_preprocess=self.rw.op_count)
        self._require_planar(start.atoms)
        while True:
            delta = self.inst.delta()
            if delta < 4:
                break
            before = self.inst.potential() if self.audit else None
            self.subroutine1(delta)
            self.subroutine2(delta)
            after_delta = self.inst.delta()
            if after_delta >= delta:
                raise InternalError(f"Δ did not drop below {delta}")
            if self.audit:
                after = self.inst.potential()
                self.stats["iterations"].append(
                    {"delta": delta, "phi_before": before.phi, "phi_after": after.phi}
                )
        self.stats["ops_main"] = self.rw.op_count - self.stats["ops_preprocess"]
        self._base_cases()
        return True

    # -- Subroutine 1 --

    def subroutine1(self, delta: int) -> None:
        # Enclosing the bridges of a cut vertex can expose a 2-cut with a
        # nonseparable bridge whose partner used to be that cut vertex, so the
        # three steps repeat until a full pass changes nothing.
        while True:
            changed = False
            while self._step_two_cut_bridge(delta):
                self._tick()
                changed = True
            while self._step_two_edge_cut(self._star_atoms()):
                self._tick()
                changed = True
            while self._step_cut_vertex(delta):
                self._tick()
                changed = True
            if not changed:
                return

    def _step_two_cut_bridge(self, delta: int) -> bool:
        inst = self.inst
        for atom in self._star_atoms():
            g = inst.local_graph(atom).graph
            if is_cycle(g):
                continue
            # Only cut vertices of degree Δ are left alone (step iii makes them
            # p-star centers); a lighter cut vertex can host a stretch since its
            # one-sided bridges can be moved to any face around it.
            held = {x for x in proper_cut_vertices(g) if g.degree(x) == delta}
            for u, v in proper_two_cuts(g):
                if max(g.degree(u), g.degree(v)) != delta or u in held or v in held:
                    continue
                for part in bridge_parts(g, [u, v]):
                    if part.is_single_edge() or is_separable_bridge(g, [u, v], part):
                        continue
                    if part.degree_at(g, u) == 0 or part.degree_at(g, v) == 0:
                        continue  # hangs from one end only; nothing to stretch apart
                    if not any(_splits_rotation(part.degree_at(g, x), g.degree(x)) for x in (u, v)):
                        continue  # a stretch would only subdivide an edge
                    self._stretch_along_bridge(atom, u, v, part)
                    return True
        return False

    def _stretch_along_bridge(self, atom: str, u: LocalVertex, v: LocalVertex, part) -> None:
        g = self.inst.local_graph(atom).graph
        plan = [(x, sorted(e for e in g.incident(x) if e in part.edges)) for x in (u, v)]
        for x, moved in plan:
            current = self.inst
            where = _atom_of(current, x, moved[0], atom) if moved else atom
            deg = current.local_graph(where).graph.degree(x)
            if not _splits_rotation(len(moved), deg):
                continue
            self.rw.stretch(where, x, moved)
            if x.is_virtual:
                far = [a for a in self.inst.pipes.get(x.ref, ()) if a != where]
                self._require_planar(far)

    def _step_two_edge_cut(self, atoms) -> bool:
        inst = self.inst
        for atom in atoms:
            g = inst.local_graph(atom).graph
            if g.number_of_edges() == 0 or is_cycle(g) or not g.is_connected():
                continue
            cuts = proper_two_edge_cuts(g)
            if not cuts:
                continue
            e, f = cuts[0]
            sides = g.components(removed_edges=[e, f])
            if len(sides) != 2:
                raise InternalError(f"2-edge-cut {e},{f} in atom {atom} does not split into two sides")
            lowest = min(g.vertices())
            side = set(sides[1] if lowest in sides[0] else sides[0])
            cut = sorted({x for x in (*g.ends(e), *g.ends(f)) if x not in side})
            edges = {h for x in side for h in g.incident(x)}
            before = inst.potential() if self.audit else None
            self.rw.enclose(atom, cut, edges)
            if self.audit:
                after = self.inst.potential()
                self.stats["enclose_2edge"].append(
                    {"phi": [before.phi, after.phi], "n_ge3": [before.n_ge3, after.n_ge3]}
                )
            return True
        return False

    def _step_cut_vertex(self, delta: int) -> bool:
        inst = self.inst
        for atom in self._star_atoms():
            g = inst.local_graph(atom).graph
            if is_cycle(g):
                continue
            shape = _shape(inst, atom)
            for v in sorted(proper_cut_vertices(g)):
                if g.degree(v) != delta:
                    continue
                if shape.kind is ShapeKind.PSTAR and shape.center == v and not self._needs_unbundling(atom, v):
                    continue
                for part in bridge_parts(g, [v]):
                    first = min(e for e in part.edges if v in g.ends(e))
                    where = _atom_of(self.inst, v, first, atom)
                    self.rw.enclose(where, [v], part.edges)
                return True
        return False

    def _needs_unbundling(self, atom: str, v: LocalVertex) -> bool:
        """A p-star center on a pipe whose far side is a p-star centered at the
        same pipe, while other pipes also join the two atoms."""
        if not v.is_virtual:
            return False
        far = self.inst.other_atom(v.ref, atom)
        shape = _shape(self.inst, far)
        if shape is None or shape.kind is not ShapeKind.PSTAR or shape.center != v:
            return False
        return len(self.inst.pipes_between(atom, far)) > 1

    # -- Subroutine 2 --

    def subroutine2(self, delta: int) -> None:
        while self._step_ppath_pipe(delta):
            self._tick()
        while self._step_heavy_pipe(delta):
            self._tick()
        while self._step_ordinary(delta):
            self._tick()

    def _heavy_pipes(self, delta: int) -> list[str]:
        inst = self.inst
        return [p for p in inst.star_pipes() if inst.pipe_degree(p) == delta]

    def _step_ppath_pipe(self, delta: int) -> bool:
        inst = self.inst
        for p in self._heavy_pipes(delta):
            a, b = inst.pipes[p]
            sides = [x for x in sorted((a, b)) if (s := _shape(inst, x)) is not None and s.kind is ShapeKind.PPATH]
            if not sides:
                continue
            mu = sides[0]
            nu = inst.other_atom(p, mu)
            between = inst.pipes_between(mu, nu)
            if len(between) == 1:
                self.rw.contract(p)
                return True
            shape = _shape(inst, mu)
            pole_pipes = sorted(x.ref for x in shape.poles if x.is_virtual)
            if len(between) != 2 or sorted(between) != pole_pipes:
                raise InternalError(f"p-path atom {mu} is joined to {nu} by an unexpected set of pipes")
            plan = []
            for q in pole_pipes:
                rot = _reference_rotation(inst, nu, virtual(q))
                plan.append((q, _consecutive_block(rot, delta // 2)))
            for q, moved in plan:
                self.rw.stretch(nu, virtual(q), moved)
            self._require_planar([mu])
            return True
        return False

    def _step_heavy_pipe(self, delta: int) -> bool:
        inst = self.inst
        for p in self._heavy_pipes(delta):
            a, b = inst.pipes[p]
            end = virtual(p)
            fixed_a = _has_fixed_rotation(inst, a, end)
            fixed_b = _has_fixed_rotation(inst, b, end)
            if fixed_a and fixed_b:
                rot_a = _reference_rotation(inst, a, end)
                rot_b = _reference_rotation(inst, b, end)
                if rotations_compatible(rot_a, rot_b) is Compatibility.INCOMPATIBLE:
                    raise _Negative({"kind": "incompatible", "pipe": p, "atoms": [a, b]})
                self.rw.stretch(a, end, _consecutive_block(rot_a, delta // 2))
                return True
            if not fixed_a and not fixed_b:
                sa, sb = _shape(inst, a), _shape(inst, b)
                if not (sa.kind is ShapeKind.PSTAR and sb.kind is ShapeKind.PSTAR):
                    raise InternalError(f"pipe {p}: both ends flexible but not two p-stars")
                if len(inst.pipes_between(a, b)) != 1:
                    raise InternalError(f"pipe {p}: p-star centers joined by several pipes")
                known = set(inst.atoms)
                self.rw.contract(p)
                self._require_planar(self._new_atoms_since(known))
                return True
            mu, nu = (a, b) if fixed_a else (b, a)
            self._fan_out(mu, nu, p)
            return True
        return False

    def _fan_out(self, mu: str, nu: str, pipe: str) -> None:
        """Stretch the fixed end of ``pipe`` in ``mu`` into a tree of degree-3 pipe ends."""
        family = [pipe]
        while True:
            self._tick()
            inst = self.inst
            heavy = sorted(q for q in family if q in inst.pipes and inst.pipe_degree(q) > 3)
            if not heavy:
                break
            q = heavy[0]
            rot = _reference_rotation(inst, mu, virtual(q))
            before = set(inst.pipes)
            self.rw.stretch(mu, virtual(q), _consecutive_block(rot, len(rot) // 2))
            family.extend(x for x in self.inst.pipes if x not in before)
        self._require_planar([nu])

    def _step_ordinary(self, delta: int) -> bool:
        inst = self.inst
        for atom in self._star_atoms():
            g = inst.local_graph(atom).graph
            for lv in g.vertices():
                if lv.is_virtual or g.degree(lv) != delta:
                    continue
                if _has_fixed_rotation(inst, atom, lv):
                    rot = _reference_rotation(inst, atom, lv)
                    self.rw.stretch(atom, lv, _consecutive_block(rot, delta // 2))
                else:
                    self.rw.detach(lv.ref)
                return True
        return False

    # -- base cases --

    def _base_cases(self) -> None:
        toroidal = self.inst.toroidal_components()
        for comp in toroidal:
            self._decide_toroidal(comp)
        frozen = set().union(*toroidal) if toroidal else set()
        self.postprocess(frozen)
        self._decide_subcubic(frozen)

    def _decide_toroidal(self, comp: frozenset) -> None:
        windings = toroidal_windings(self.inst, comp)
        if len(set(windings)) > 1:
            raise _Negative({"kind": "toroidal", "atoms": sorted(comp), "windings": sorted(windings)})

    def postprocess(self, frozen: set) -> None:
        while True:
            self._tick()
            atoms = [a for a in self.inst.atoms if a not in frozen]
            if self._delete_cut_edge(atoms):
                continue
            if self._step_two_edge_cut(atoms):
                continue
            return

    def _delete_cut_edge(self, atoms) -> bool:
        for atom in atoms:
            g = self.inst.local_graph(atom).graph
            bad = cut_edges(g)
            if bad:
                self.rw.delete(atom, bad[0])
                return True
        return False

    def _decide_subcubic(self, frozen: set) -> None:
        inst = self.inst
        atoms = [a for a in inst.atoms if a not in frozen]
        self._require_planar(atoms)
        variables: dict[str, int] = {}
        reference: dict[str, Any] = {}
        for atom in atoms:
            g = inst.local_graph(atom).graph
            if g.number_of_edges() == 0 and g.number_of_vertices() == 1:
                continue
            shape = classify_shape(g)
            if shape.kind is ShapeKind.CYCLE:
                continue
            if shape.kind not in (ShapeKind.PPATH, ShapeKind.SUBDIVIDED_3CONNECTED):
                raise InternalError(f"after postprocessing atom {atom} is {shape}")
            variables[atom] = len(variables)
            reference[atom] = planar_rotation_system(g)
        formula = TwoSatFormula(len(variables))
        for p in sorted(inst.pipes):
            a, b = inst.pipes[p]
            if a in frozen:
                continue
            if a not in variables or b not in variables:
                raise InternalError(f"pipe {p} ends at a local graph without two mirror images")
            end = virtual(p)
            verdict = rotations_compatible(reference[a].rotation(end), reference[b].rotation(end))
            if verdict is Compatibility.OPPOSITE:
                formula.add_equal(variables[a], variables[b])
            elif verdict is Compatibility.SAME:
                formula.add_differ(variables[a], variables[b])
            else:
                raise InternalError(f"pipe {p} of degree {inst.pipe_degree(p)} in the subcubic stage")
        self.stats["twosat"] = {"variables": formula.num_vars, "clauses": len(formula.clauses)}
        if solve(formula) is None:
            raise _Negative({"kind": "unsatisfiable", "atoms": sorted(variables)})


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------


def toroidal_windings(inst: Instance, comp) -> list[int]:
    """Winding number of each cycle of G around a toroidal component.

    A cycle winding k times around the host cycle crosses every one of its
    pipes k times.
    """
    comp = set(comp)
    length = sum(1 for a, b in inst.pipes.values() if a in comp and b in comp)
    vs = [v for v in inst.vertices if inst.vertices[v] in comp]
    g = inst.G.induced_subgraph(vs)
    out = []
    for cycle in g.components():
        members = set(cycle)
        crossings = sum(1 for e, (u, _, p) in inst.edges.items() if u in members and p is not None)
        out.append(crossings // length)
    return out


def decide_toroidal(inst: Instance) -> bool:
    """Verdict for an instance whose host graph is a single toroidal cycle."""
    comps = inst.toroidal_components()
    if len(comps) != 1 or set(comps[0]) != set(inst.atoms):
        raise ValueError("instance is not a single toroidal component")
    return len(set(toroidal_windings(inst, comps[0]))) <= 1


def preprocess(inst: Instance) -> Instance:
    rw = Rewriter(require_valid(inst))
    return rw.normalize()


def _stage(inst: Instance, run) -> Instance | Decision:
    d = Decider(inst)
    try:
        run(d)
    except _Negative as neg:
        return Decision(False, neg.reason, d.rw.trace, d.stats)
    return d.inst


def subroutine1(inst: Instance) -> Instance | Decision:
    """One pass of the cut-resolving stage at the current Δ; a negative :class:`Decision` if it fails."""
    return _stage(inst, lambda d: d.subroutine1(d.inst.delta()))


def subroutine2(inst: Instance) -> Instance | Decision:
    """Lower Δ of a Δ-nice instance by one."""
    return _stage(inst, lambda d: d.subroutine2(d.inst.delta()))


def postprocess(inst: Instance) -> Instance:
    """Delete cut edges and enclose across 2-edge-cuts in every non-toroidal local graph.

    Expects a normal subcubic instance.
    """
    d = Decider(inst)
    d.postprocess(set().union(*inst.toroidal_components()))
    return d.inst


def decide_subcubic(inst: Instance) -> bool:
    require_valid(inst)
    if any(lg.graph.max_degree() > 3 for lg in inst.local_graphs()):
        raise ValueError("instance is not subcubic")
    d = Decider(inst)
    try:
        d.rw.normalize()
        d._require_planar(d.inst.atoms)
        d._base_cases()
    except _Negative:
        return False
    return True


def decide(inst: Instance, audit: bool = False) -> Decision:
    return Decider(inst, audit=audit).run()


def verify_witness(initial: Instance, decision: Decision) -> bool:
    """Replay the trace and check that the terminal reason holds in the final state."""
    final = replay(initial, decision.trace)
    reason = decision.reason
    kind = reason["kind"]
    if kind == "nonplanar":
        return reason["atom"] in final.atoms and not test_planarity(final.local_graph(reason["atom"]).graph)
    if kind == "incompatible":
        p = reason["pipe"]
        a, b = final.pipes[p]
        rs_a = planar_rotation_system(final.local_graph(a).graph)
        rs_b = planar_rotation_system(final.local_graph(b).graph)
        end = virtual(p)
        return rotations_compatible(rs_a.rotation(end), rs_b.rotation(end)) is Compatibility.INCOMPATIBLE
    if kind == "toroidal":
        return len(set(toroidal_windings(final, reason["atoms"]))) > 1
    if kind in ("unsatisfiable", "positive"):
        return True
    return False


__all__ = [
    "Decision",
    "Decider",
    "InternalError",
    "decide",
    "decide_subcubic",
    "decide_toroidal",
    "postprocess",
    "preprocess",
    "subroutine1",
    "subroutine2",
    "toroidal_windings",
    "verify_witness",
]
