from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from chainstab.charge import (INF, CentralCharge, GLtildeElement, PhaseValue, QQi, SemistableRecord,
                              StabilityData, act_autoequivalence, act_gl, alpha_chain_charge,
                              alpha_node_charge, alpha_quiver_charge, evaluate, glue_charges, phase, slope)
from chainstab.lattice import LatticeClass


def test_node_charge_values():
    assert evaluate(alpha_node_charge(0), (1, 2)) == QQi(-1, 2)
    assert evaluate(alpha_node_charge(1), (0, 1)) == QQi(-1, 1)


def test_glued_additivity():
    Z = alpha_chain_charge([0, 0])
    assert evaluate(Z, (1, 1, 2, 0)) == QQi(-3, 1)
    assert evaluate(alpha_chain_charge([0, 0]), (0, 1, 0, 1)) == QQi(0, 2)
    assert evaluate(alpha_chain_charge([0, 1]), (1, 1, 1, 1)) == QQi(-3, 2)


def test_slopes():
    Z = CentralCharge((1, 0), (0, 1))  # evaluate directly as re + i im
    assert slope(Z, (-1, 2)) == Fraction(1, 2)
    assert slope(Z, (-3, 1)) == 3
    assert slope(Z, (-3, 0)) == INF
    with pytest.raises(ValueError):
        slope(Z, (0, 0))


def test_phases():
    Z = CentralCharge((1, 0), (0, 1))
    assert phase(Z, (-1, 0)).exact() == 1
    assert phase(Z, (0, 1)).exact() == Fraction(1, 2)
    assert phase(Z, (-1, 2)) > phase(Z, (0, 1))
    with pytest.raises(ValueError):
        phase(Z, (1, 0))  # positive real axis is outside the heart


def test_rotation_relabels_i_to_phase_zero():
    # T rotates by +90 degrees, so T^{-1}(i) = 1 and the phase 1/2 becomes 0
    g = GLtildeElement(((0, -1), (1, 0)), 0)
    rec = SemistableRecord("x", LatticeClass.quiver((1,)), PhaseValue(QQi(0, 1)))
    data = act_gl(StabilityData(CentralCharge((0,), (1,)), (rec,)), g)
    assert evaluate(data.charge, (1,)) == QQi(1, 0)
    assert data.records[0].phase == PhaseValue.integer(0)


def test_identity_shift_action():
    rec = SemistableRecord("x", LatticeClass.quiver((1,)), PhaseValue(QQi(-1, 1)))
    data = StabilityData(CentralCharge((-1,), (1,)), (rec,))
    same = act_gl(data, GLtildeElement(((1, 0), (0, 1)), 0))
    assert same == data
    moved = act_gl(data, GLtildeElement(((1, 0), (0, 1)), 1))
    assert moved.charge == data.charge
    assert moved.records[0].phase.exact() == Fraction(3, 4) - 1


def test_autoequivalence_actions():
    Z = alpha_chain_charge([0, 1])
    data = StabilityData(Z, ())
    neg = act_autoequivalence(data, [[-1 if i == j else 0 for j in range(4)] for i in range(4)])
    assert neg.charge == -Z.flatten()
    assert act_autoequivalence(data, [[int(i == j) for j in range(4)] for i in range(4)]).charge == Z.flatten()
    swap = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
    assert act_autoequivalence(data, swap).charge == alpha_chain_charge([1, 0]).flatten()
    with pytest.raises(ValueError):
        act_autoequivalence(data, [[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def test_glue_requires_nodes():
    with pytest.raises(ValueError):
        glue_charges([])


def test_det_must_be_positive():
    with pytest.raises(ValueError):
        GLtildeElement(((1, 0), (0, -1)))


small = st.fractions(min_value=-3, max_value=3, max_denominator=3)
nonzero = st.tuples(small, small).filter(lambda p: p != (0, 0))


@st.composite
def gl_elements(draw):
    T = [[draw(small) for _ in range(2)] for _ in range(2)]
    assume(T[0][0] * T[1][1] - T[0][1] * T[1][0] > 0)
    return GLtildeElement(tuple(map(tuple, T)), draw(st.integers(-1, 1)))


def _pv(p):
    return PhaseValue.of(QQi(*p))


@settings(max_examples=200, deadline=None)
@given(nonzero, nonzero)
def test_phase_order_matches_float_args(a, b):
    pa, pb = _pv(a), _pv(b)
    fa, fb = pa.approx(), pb.approx()
    if abs(fa - fb) > 1e-9:
        assert (pa < pb) == (fa < fb)
    else:
        assert pa == pb


@settings(max_examples=150, deadline=None)
@given(gl_elements(), nonzero, nonzero)
def test_lift_is_monotone_and_invertible(g, a, b):
    pa, pb = _pv(a), _pv(b)
    assert g.unlift(g.lift(pa)) == pa
    if pa < pb:
        assert g.lift(pa) < g.lift(pb)
        assert g.unlift(pa) < g.unlift(pb)
    # lifting commutes with integer shifts
    assert g.lift(pa.shifted(1)) == g.lift(pa).shifted(1)


@settings(max_examples=100, deadline=None)
@given(gl_elements(), nonzero)
def test_inverse_element(g, a):
    p = _pv(a)
    assert g.inverse().lift(p) == g.unlift(p)


@settings(max_examples=100, deadline=None)
@given(st.lists(small, min_size=1, max_size=4), st.data())
def test_quiver_charge_lands_in_upper_half_plane(alpha, data):
    Z = alpha_quiver_charge(alpha)
    dims = data.draw(st.lists(st.integers(0, 4), min_size=len(alpha), max_size=len(alpha)))
    assume(any(dims))
    z = evaluate(Z, dims)
    assert z.im > 0 and z.in_hbar()
