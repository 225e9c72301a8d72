from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chainstab.anmodel import IntervalSum, hom_dim, is_semistable
from chainstab.charge import PhaseValue, QQi, alpha_quiver_charge, phase
from chainstab.walls import (ChargeFamily, SlicingSample, alpha_quiver_family, chamber_csv, chamber_grid, enumerate_semistables,
                             exact_walls, hn_stratification, objects_of_class, semistables_by_phase,
                             slicing_distance_estimate, slicing_samples, wall_equation)

M12 = IntervalSum.of(2, [(1, 2)])
SPLIT = IntervalSum.of(2, [(1, 1), (2, 2)])


def test_single_wall_for_a2():
    ws = exact_walls((1, 1))
    assert len(ws) == 1
    w = ws[0]
    assert w.equation() == "a1 - a2 = 0"
    assert {u.coords for u in w.subclasses} == {(0, 1), (1, 0)}


def test_a3_wall_and_simple():
    ws = exact_walls((1, 1, 0))
    assert [w.equation() for w in ws] == ["a1 - a2 = 0"]
    assert exact_walls((1, 0)) == []


def test_walls_respect_box():
    assert exact_walls((1, 1), box=[(0, 1), (2, 3)]) == []
    assert len(exact_walls((1, 1), box=[(0, 2), (0, 2)])) == 1


def test_wall_crossing_table():
    assert enumerate_semistables((1, 1), alpha_quiver_charge([1, 0])) == [M12]
    assert set(enumerate_semistables((1, 1), alpha_quiver_charge([1, 1]))) == {M12, SPLIT}
    assert enumerate_semistables((1, 1), alpha_quiver_charge([0, 1])) == []


def test_on_wall_both_strictly_semistable():
    Z = alpha_quiver_charge([Fraction(1, 2), Fraction(1, 2)])
    for obj in (M12, SPLIT):
        res = is_semistable(obj, Z)
        assert res.verdict and not res.stable


def test_even_shifts_added():
    objs = enumerate_semistables((1, 1), alpha_quiver_charge([1, 0]), shift_bound=2)
    assert objs == [M12.shift(-2), M12, M12.shift(2)]
    groups = semistables_by_phase(objs, alpha_quiver_charge([1, 0]))
    assert [g[0].k for g in groups] == [-2, 0, 2]


def test_stratification():
    Z = alpha_quiver_charge([0, 1])
    strata = hn_stratification((1, 1), Z)
    assert [(t, set(objs)) for t, objs in strata] == [(((0, 1), (1, 0)), {M12, SPLIT})]
    assert hn_stratification((2, 0), Z) == [(((2, 0),), [IntervalSum.simple(2, 1, 2)])]
    Zs = alpha_quiver_charge([1, 0])
    assert any(t == ((1, 1),) for t, _ in hn_stratification((1, 1), Zs))


def test_objects_of_class_counts():
    assert len(objects_of_class((1, 1))) == 2
    assert len(objects_of_class((1, 1, 1))) == 4  # compositions of a length-3 interval


def test_quadratic_family_rejected():
    # p moves Re Z(S_1) and q moves Im Z(S_2): the cross product picks up p*q
    fam = ChargeFamily((0, 0), (1, 1), ((-1, 0), (0, 0)), ((0, 0), (0, 1)))
    with pytest.raises(ValueError, match="quadratic"):
        wall_equation((1, 1), (1, 0), fam)


def test_slicing_distance_example():
    # sigma-HN of M[1,2] is S_2 then S_1; tau keeps M[1,2] semistable
    samples = slicing_samples([M12], alpha_quiver_charge([0, 1]), alpha_quiver_charge([1, 0]))
    est = slicing_distance_estimate(samples)
    assert est.delta == PhaseValue(QQi(2, 1))
    assert math.isclose(est.delta.approx(), math.atan2(1, 2) / math.pi, rel_tol=1e-12)
    assert est.upper >= Fraction(est.delta.approx()) - Fraction(1, 10**9)


def test_slicing_distance_trivial_cases():
    Z = alpha_quiver_charge([1, 0])
    est = slicing_distance_estimate(slicing_samples([M12, IntervalSum.simple(2, 1)], Z, Z))
    assert est.exact == 0
    with pytest.raises(ValueError):
        slicing_distance_estimate([])
    s = SlicingSample(PhaseValue.integer(1), [PhaseValue.integer(1)], "x")
    assert slicing_distance_estimate([s]).exact == 0


def test_chamber_grid_and_csv():
    reps = chamber_grid((1, 1), None, [(-1, 1), (-1, 1)], 2)
    assert len(reps) == 4
    for r in reps:
        a1, a2 = r.point
        assert len(r.semistable) == (1 if a1 > a2 else 0)
    text = chamber_csv(reps, ["a1", "a2"])
    assert text.splitlines()[0] == "a1,a2,n_semistable,hn_type_id"
    assert len(text.splitlines()) == 5


alphas = st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3), min_size=2, max_size=3)


@settings(max_examples=60, deadline=None)
@given(alphas, st.data())
def test_semistable_sets_constant_off_walls(alpha, data):
    """Moving inside a chamber along a segment that crosses no wall keeps the set fixed."""
    n = len(alpha)
    beta = tuple(data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n)))
    if not any(beta):
        return
    ws = exact_walls(beta)
    if any(w.contains(alpha) for w in ws):
        return
    other = [a + Fraction(1, 1000) for a in alpha]
    if any(w.side(alpha) != w.side(other) for w in ws):
        return
    assert enumerate_semistables(beta, alpha_quiver_charge(alpha)) == \
        enumerate_semistables(beta, alpha_quiver_charge(other))


@settings(max_examples=60, deadline=None)
@given(alphas, st.data())
def test_no_hom_down_in_phase(alpha, data):
    n = len(alpha)
    Z = alpha_quiver_charge(alpha)
    objs = []
    for beta in [(1,) * n, tuple(data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n)))]:
        if any(beta):
            objs += enumerate_semistables(beta, Z)
    for A in objs:
        for B in objs:
            if phase(Z, A.cls) > phase(Z, B.cls):
                assert hom_dim(A, B) == 0
