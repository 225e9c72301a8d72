from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from chainstab import towerrw as t
from chainstab.towerrw import (EXT, O, L, Pull, Push, Shift, Twist, Zero, build_tower, check_semiorthogonality,
                               derive_gluing_functor, gluing_term, normalize, select, show, tensor)

GLUING_IDS = {
    2: ["A4b", "A9.dual", "A2", "A2", "A4a", "A2", "A10", "A4c", "A9.tensor_unit", "A5",
        "A9.push_sum", "A6", "A1", "A1", "A9.sum_clean", "A9.tensor_shift", "A9.tensor_unit"],
    3: ["A4b", "A9.dual", "A2", "A2", "A2", "A4a", "A2", "A10", "A4b", "A8", "A7",
        "A9.push_shift", "A9.tensor_shift", "A3", "A9.tensor_unit"],
}


def test_single_rules():
    assert normalize(Push(1, Twist(1, -1)))[0] == Zero(0)
    assert normalize(Push(2, O(2)))[0] == O(1)
    assert show(normalize(L(3, 2), select(["A4"]))[0]) == "pull_3(O_2(-1))"


def test_projection_then_vanishing():
    end, d = normalize(Push(1, tensor(Pull(1, EXT), Twist(1, -1))))
    assert end == Zero(0)
    assert d.rule_ids()[:2] == ["A2", "A1"]


def test_pullback_alone_is_normal():
    x = Pull(2, Pull(1, EXT))
    end, d = normalize(x)
    assert end == x and d.steps == []


@pytest.mark.parametrize("n", [2, 3])
def test_gluing_rule_sequence(n):
    d = derive_gluing_functor(n)
    assert d.rule_ids() == GLUING_IDS[n]
    assert show(d.checkpoints[-1].term) == "E[-1]"


def test_n2_route_uses_split_kernel():
    fams = derive_gluing_functor(2).families()
    assert {"A5", "A1", "A6"} <= fams


def test_n3_route_uses_kernel_sequence():
    fams = derive_gluing_functor(3).families()
    assert {"A7", "A8"} <= fams


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_gluing_replays(n):
    d = derive_gluing_functor(n)
    assert d.end == Shift(EXT, -1)
    assert d.replay() == d.end
    assert d.pretty().endswith("= E[-1]")


def test_semiorthogonality_rejects_self():
    with pytest.raises(ValueError):
        check_semiorthogonality(2, 1)


@pytest.mark.parametrize("n,j", [(n, j) for n in range(2, 5) for j in range(2, n + 1)])
def test_semiorthogonality_vanishes(n, j):
    assert check_semiorthogonality(n, j).end == Zero(0)


def test_k_routes_agree():
    one, _ = normalize(t.unified_k_term(1))
    two, _ = normalize(t.unified_k_term(2))
    assert one == Shift(O(0), -1) and two == Shift(O(1), -1)


def test_budget_is_enforced():
    with pytest.raises(t.BudgetExceeded) as exc:
        normalize(gluing_term(3), budget=3)
    assert len(exc.value.partial.steps) == 3


def test_tower_record():
    assert build_tower(1).line_bundles == {"L_{1,1}": "O_1"}
    tw = build_tower(2)
    assert tw.levels[1].fiber_rank == 3
    assert build_tower(3).line_bundles == {"L_{3,1}": "O_3(-1)", "L_{3,2}": "pull_3(O_2(-1))", "L_{3,3}": "O_3"}


def test_level_mismatch_detected():
    with pytest.raises(ValueError):
        t.level(Push(2, O(1)))


def test_json_hashes_chain():
    d = derive_gluing_functor(2)
    js = d.to_json()
    steps = js["steps"]
    assert steps[0]["before"] == js["start_hash"]
    assert all(a["after"] == b["before"] for a, b in zip(steps, steps[1:]))
    assert steps[-1]["after"] == js["end_hash"]


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4), st.data())
def test_normal_forms_are_fixed_points(n, data):
    j = data.draw(st.integers(1, n))
    k = data.draw(st.integers(-2, 2))
    x = Push(n, tensor(Pull(n, L(n - 1, 1)), L(n, j), Twist(n, k)))
    end, _ = normalize(x)
    again, d = normalize(end)
    assert again == end and d.steps == []
    assert t.level(end) == n - 1
