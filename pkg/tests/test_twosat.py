from __future__ import annotations

import random

import pytest

from atomembed.twosat import FormulaError, TwoSatFormula, brute_force, solve


def test_parity_contradiction():
    f = TwoSatFormula(3)
    f.add_equal(0, 1)
    f.add_equal(1, 2)
    f.add_differ(0, 2)
    assert solve(f) is None


def test_single_inequality():
    f = TwoSatFormula(2)
    f.add_differ(0, 1)
    got = solve(f)
    assert got is not None and got[0] != got[1]


def test_long_equality_chain_with_odd_cycle():
    n = 100
    f = TwoSatFormula(n)
    for i in range(n - 1):
        f.add_equal(i, i + 1)
    f.add_differ(0, n - 1)
    assert solve(f) is None


def test_even_cycle_of_inequalities_is_satisfiable():
    f = TwoSatFormula(4)
    for i in range(4):
        f.add_differ(i, (i + 1) % 4)
    got = solve(f)
    assert got is not None and f.satisfied_by(got)


def test_unit_clause_through_repeated_literal():
    f = TwoSatFormula(1)
    f.add_clause(-1, -1)
    assert solve(f) == [False]


def test_out_of_range_literals():
    f = TwoSatFormula(2)
    with pytest.raises(FormulaError):
        f.add_clause(0, 1)
    with pytest.raises(FormulaError):
        f.add_clause(3, 1)


@pytest.mark.parametrize("seed", range(40))
def test_agrees_with_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 8)
    f = TwoSatFormula(n)
    for _ in range(rng.randint(0, 3 * n)):
        a = rng.randint(1, n) * rng.choice((1, -1))
        b = rng.randint(1, n) * rng.choice((1, -1))
        f.add_clause(a, b)
    got = solve(f)
    ref = brute_force(f)
    assert (got is None) == (ref is None)
    if got is not None:
        assert f.satisfied_by(got)
