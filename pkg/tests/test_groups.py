import math

import numpy as np
import pytest
from sympy.combinatorics import Permutation, PermutationGroup

from permclone.gates import cnot_gate, toffoli_gate
from permclone.groups import (GroupTooLarge, PermGroup, affine_group, affine_group_order,
                              compose, gate_group, invert, symmetric_group, wire_group,
                              wreath_group)


def sympy_order(degree, gens):
    return int(PermutationGroup([Permutation(list(map(int, g)), size=degree) for g in gens]
                                or [Permutation(list(range(degree)))]).order())


def test_order_examples():
    assert symmetric_group(8).order() == 40320
    assert PermGroup(4, [[1, 0, 3, 2]]).order() == 2
    assert PermGroup(5, []).order() == 1


def test_standard_group_orders():
    s2 = symmetric_group(2)
    assert wreath_group(s2, 3).order() == 48
    assert wreath_group(symmetric_group(3), 2).order() == 72
    assert wreath_group(s2, 1).order() == 2
    assert wire_group(2, 1).order() == 1
    assert wire_group(2, 4).order() == 24
    assert affine_group(2, 3).order() == 1344 == affine_group_order(2, 3)
    assert affine_group(3, 2).order() == 432
    with pytest.raises(ValueError):
        affine_group(4, 1)


def test_generated_by_cnot_and_toffoli():
    g = gate_group([cnot_gate(), toffoli_gate()], 2, 3)
    assert g.order() == sympy_order(8, g.gens)


def test_schreier_sims_matches_sympy_on_random_generators():
    rng = np.random.default_rng(7)
    for _ in range(60):
        m = int(rng.integers(2, 13))
        gens = []
        for _ in range(int(rng.integers(1, 4))):
            if rng.random() < 0.5:
                gens.append(rng.permutation(m))
            else:
                # sparse generators give small, structured groups
                p = np.arange(m)
                i, j = rng.choice(m, 2, replace=False)
                p[[i, j]] = p[[j, i]]
                gens.append(p)
        g = PermGroup(m, gens)
        assert g.order() == sympy_order(m, gens)
        for h in gens:
            assert g.contains(h)


def test_membership_against_sympy():
    rng = np.random.default_rng(11)
    gens = [[1, 0, 2, 3, 4, 5], [0, 1, 3, 4, 5, 2]]
    g = PermGroup(6, gens)
    sg = PermutationGroup([Permutation(x) for x in gens])
    for _ in range(200):
        p = rng.permutation(6)
        assert g.contains(p) == sg.contains(Permutation(p.tolist()))


def test_known_order_and_base_hint_do_not_change_the_group():
    gens = [np.roll(np.arange(7), 1), np.array([1, 0, 2, 3, 4, 5, 6])]
    a = PermGroup(7, gens)
    b = PermGroup(7, gens, base_hint=[6, 5, 4], known_order=5040)
    assert a == b and a.order() == 5040


def test_elements_are_distinct_and_members():
    g = wreath_group(symmetric_group(2), 2)
    elems = {e.tobytes() for e in g.elements()}
    assert len(elems) == 8
    batched = {row.tobytes() for b in g.element_batches(batch=3) for row in b}
    assert batched == elems
    with pytest.raises(GroupTooLarge):
        next(symmetric_group(10).elements(cap=1000))


def test_random_elements_are_uniform_on_sym4():
    g = symmetric_group(4)
    rng = np.random.default_rng(0)
    draws = 24000
    counts: dict[bytes, int] = {}
    for _ in range(draws):
        e = g.random_element(rng)
        counts[e.tobytes()] = counts.get(e.tobytes(), 0) + 1
    assert len(counts) == 24
    mean = draws / 24
    sd = math.sqrt(draws * (1 / 24) * (23 / 24))
    assert all(abs(c - mean) < 5 * sd for c in counts.values())


def test_random_elements_are_seed_stable():
    g = symmetric_group(6)
    a = [g.random_element(np.random.default_rng(5)).tolist() for _ in range(3)]
    b = [g.random_element(np.random.default_rng(5)).tolist() for _ in range(3)]
    assert a == b


def test_compose_and_invert():
    a = np.array([1, 2, 0], dtype=np.int32)
    b = np.array([0, 2, 1], dtype=np.int32)
    assert compose(a, b).tolist() == [2, 1, 0]
    assert compose(a, invert(a)).tolist() == [0, 1, 2]


def test_rejects_non_permutation():
    with pytest.raises(ValueError):
        PermGroup(3, [[0, 0, 1]])
