from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chainstab.charge import INF, QQi
from chainstab.curvechain import (ChainClass, alpha_walls, mu_alpha, sym_power_case, torsion_free_necessary,
                                  z_alpha)


def test_charge_values():
    assert z_alpha([0], ChainClass.of([(1, 2)])) == QQi(-1, 2)
    assert z_alpha([1], ChainClass.of([(0, 1)])) == QQi(-1, 1)
    b = ChainClass.of([(0, 1), (0, 1)])
    assert z_alpha([0, 1], b) == QQi(-1, 2)
    assert mu_alpha([0, 1], b) == Fraction(1, 2)
    assert mu_alpha([0, 0], ChainClass.of([(1, 0), (2, 0)])) == INF


def test_torsion_condition():
    assert not torsion_free_necessary(ChainClass.of([(1, 0), (0, 1)]))
    assert torsion_free_necessary(ChainClass.of([(0, 1), (0, 1)]))
    v = torsion_free_necessary(ChainClass.of([(1, 0), (2, 0)]))
    assert v.possible and v.note == "phase-1 locus"


def test_walls_simple_box():
    ws = alpha_walls(ChainClass.of([(0, 1), (0, 1)]), [(0, 0), (0, 0)])
    assert [w.equation() for w in ws] == ["a1 - a2 = 0"]
    assert alpha_walls(ChainClass.of([(0, 1), (0, 0)]), [(0, 0), (0, 0)]) == []


def test_walls_degree_box_verified_by_slopes():
    beta = ChainClass.of([(1, 1), (0, 1)])
    ws = alpha_walls(beta, [(-1, 1), (-1, 1)])
    assert {w.equation() for w in ws} >= {"a1 - a2 = 1", "a1 - a2 = -1"}
    for w in ws:
        # a point on the wall: solve for a1 with a2 = 0
        c1, c2 = w.coeffs
        p = [-w.const / c1, Fraction(0)] if c1 else [Fraction(0), -w.const / c2]
        assert w.contains(p)
        sub = ChainClass.of([tuple(w.subclass.coords[i:i + 2]) for i in (0, 2)])
        assert mu_alpha(p, sub) == mu_alpha(p, beta)


def test_sym_power():
    rep = sym_power_case(ChainClass.of([(1, 0), (1, 0)]))
    assert rep.phase.exact() == 1 and rep.length == 2
    assert sym_power_case(ChainClass.of([(3, 0)])).length == 3
    with pytest.raises(ValueError):
        sym_power_case(ChainClass.of([(0, 0), (0, 0)]))


def test_empty_box_rejected():
    with pytest.raises(ValueError):
        alpha_walls(ChainClass.of([(0, 1)]), [(1, 0)])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(1, 3)), min_size=1, max_size=3),
       st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=3, max_size=3))
def test_mu_is_minus_re_over_im(pairs, alpha):
    b = ChainClass.of(pairs)
    a = alpha[:b.n]
    z = z_alpha(a, b)
    assert mu_alpha(a, b) == -z.re / z.im
