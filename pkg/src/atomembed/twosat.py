"""2-CNF satisfiability through the implication graph.

Literals are nonzero integers: ``i + 1`` is variable ``i`` true and
``-(i + 1)`` is it false.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx


class FormulaError(ValueError):
    pass


@dataclass
class TwoSatFormula:
    num_vars: int
    clauses: list[tuple[int, int]] = field(default_factory=list)

    def _check(self, lit: int) -> None:
        if not isinstance(lit, int) or lit == 0 or abs(lit) > self.num_vars:
            raise FormulaError(f"literal {lit!r} out of range for {self.num_vars} variables")

    def add_clause(self, a: int, b: int) -> None:
        self._check(a)
        self._check(b)
        self.clauses.append((a, b))

    def add_equal(self, x: int, y: int) -> None:
        """Variables ``x`` and ``y`` (0-based) take the same value."""
        self.add_clause(x + 1, -(y + 1))
        self.add_clause(-(x + 1), y + 1)

    def add_differ(self, x: int, y: int) -> None:
        self.add_clause(x + 1, y + 1)
        self.add_clause(-(x + 1), -(y + 1))

    def validate(self) -> None:
        for a, b in self.clauses:
            self._check(a)
            self._check(b)

    def satisfied_by(self, assignment: list[bool]) -> bool:
        def val(lit: int) -> bool:
            return assignment[abs(lit) - 1] == (lit > 0)

        return all(val(a) or val(b) for a, b in self.clauses)


def solve(formula: TwoSatFormula) -> list[bool] | None:
    """A satisfying assignment, or ``None`` when unsatisfiable."""
    formula.validate()
    n = formula.num_vars
    graph = nx.DiGraph()
    graph.add_nodes_from(range(1, n + 1))
    graph.add_nodes_from(range(-n, 0))
    for a, b in formula.clauses:
        graph.add_edge(-a, b)
        graph.add_edge(-b, a)
    cond = nx.condensation(graph)
    comp = cond.graph["mapping"]
    # Components in topological order; a literal is true when its component
    # comes later than its negation's.
    rank = {c: i for i, c in enumerate(nx.topological_sort(cond))}
    assignment = []
    for i in range(1, n + 1):
        if comp[i] == comp[-i]:
            return None
        assignment.append(rank[comp[i]] > rank[comp[-i]])
    return assignment


def brute_force(formula: TwoSatFormula) -> list[bool] | None:
    """Exhaustive reference solver for small formulas."""
    from itertools import product

    for bits in product((False, True), repeat=formula.num_vars):
        if formula.satisfied_by(list(bits)):
            return list(bits)
    return None
