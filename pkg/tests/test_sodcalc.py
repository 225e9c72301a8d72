from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from chainstab.sodcalc import (Component, SODRecord, check_semiorthogonal, complement_component_count,
                               euler_pairing, left_mutate, right_mutate)


def simples():
    return SODRecord([Component("S1", 1), Component("S2", 1)], [[1, -1], [0, 1]])


def test_semiorthogonal_checks():
    assert check_semiorthogonal(simples())
    assert check_semiorthogonal(SODRecord([("A", 1), ("B", 1)], [[1, 5], [0, 1]]))
    assert not check_semiorthogonal(SODRecord([("A", 1), ("B", 1)], [[1, 0], [1, 1]]))


def test_left_mutation_of_simples_is_projective():
    out = left_mutate(simples(), 0)
    assert [c.label for c in out.components] == ["L_{S1}(S2)", "S1"]
    assert out.classes[0] == [1, 1]
    assert check_semiorthogonal(out)


def test_left_mutation_chi_one():
    out = left_mutate(SODRecord([("A", 1), ("B", 1)], [[1, 1], [0, 1]]), 0)
    assert out.classes[0] == [-1, 1]


def test_left_then_right_restores():
    rec = simples()
    back = right_mutate(left_mutate(rec, 0), 0)
    assert back.gram == rec.gram and back.classes == rec.classes
    assert [c.label for c in back.components] == ["S1", "S2"]


def test_non_unimodular_block_rejected():
    with pytest.raises(ValueError):
        left_mutate(SODRecord([("A", 1), ("B", 1)], [[2, 1], [0, 1]]), 0)
    with pytest.raises(IndexError):
        left_mutate(simples(), 1)


def test_component_counts():
    assert complement_component_count(1) == 1
    assert complement_component_count(2, [3]) == 4
    assert complement_component_count(2, [2]) == 2
    with pytest.raises(ValueError):
        complement_component_count(2)


def test_euler_pairing_of_projectives():
    chi = [[1, -1], [0, 1]]
    assert euler_pairing([[1, 1], [0, 1]], chi) == [[1, 0], [1, 1]]


def random_record(rng: random.Random) -> SODRecord:
    ranks = [rng.randint(1, 2) for _ in range(rng.randint(2, 4))]
    size = sum(ranks)
    G = [[0] * size for _ in range(size)]
    pos = 0
    starts = []
    for r in ranks:
        starts.append(pos)
        pos += r
    block_of = [k for k, r in enumerate(ranks) for _ in range(r)]
    for i in range(size):
        for j in range(size):
            if block_of[i] < block_of[j]:
                G[i][j] = rng.randint(-3, 3)
            elif i == j:
                G[i][j] = 1
            elif block_of[i] == block_of[j] and i < j:
                G[i][j] = rng.randint(-2, 2)  # unitriangular blocks are unimodular
    comps = [Component(f"C{k}", r) for k, r in enumerate(ranks)]
    return SODRecord(comps, G)


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False), st.data())
def test_mutations_preserve_semiorthogonality_and_invert(rnd, data):
    rec = random_record(rnd)
    k = data.draw(st.integers(0, len(rec.components) - 2))
    L = left_mutate(rec, k)
    assert check_semiorthogonal(L)
    back = right_mutate(L, k)
    assert back.gram == rec.gram and back.classes == rec.classes
    assert [c.label for c in back.components] == [c.label for c in rec.components]
    # the Gram matrix is the pairing of the new classes
    assert euler_pairing(L.classes, rec.gram) == L.gram
