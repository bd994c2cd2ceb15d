import numpy as np
import pytest

from permclone import monoids as mo
from permclone.clones import (CloneSpec, ancilla_closed_up_to, borrow_closed_up_to, clear_cache,
                              compare, factoring_check, full_clone_relation_oracle, is_full_clone,
                              member, slice_group, split_parallel)
from permclone.gates import Gate, cnot_gate, not_gate, parallel, toffoli_gate
from permclone.groups import affine_group, symmetric_group, wire_group, wreath_group
from permclone.relations import (Relation, affine_relation, all_unary_subsets, diagonal, iota,
                                 leq_chain, neq, unary)
from permclone.weights import absorbing_example_weight, map_monoid, ones_count_weight


def hamming(q):
    return Relation.from_predicate(q, 3, lambda a, b, c: a == b or b == c)


def test_spec_json_roundtrip():
    spec = CloneSpec.of(neq(2), ones_count_weight(), name="x")
    again = CloneSpec.from_json(spec.to_json())
    assert again.key() == spec.key()
    with pytest.raises(ValueError):
        CloneSpec(2, ())
    with pytest.raises(ValueError):
        CloneSpec.of(neq(2), neq(3))


def test_slice_contains_wire_permutations():
    for spec in (CloneSpec.of(leq_chain(2)), CloneSpec.of(affine_relation(2)),
                 CloneSpec.of(ones_count_weight()), CloneSpec.of(iota(3, 3))):
        for n in (1, 2, 3):
            assert wire_group(spec.q, n).is_subgroup_of(slice_group(spec, n))


def test_member_agrees_with_group_membership():
    rng = np.random.default_rng(4)
    specs = [CloneSpec.of(unary(2, [0])), CloneSpec.of(neq(2)), CloneSpec.of(affine_relation(2)),
             CloneSpec.of(neq(3)), CloneSpec.of(ones_count_weight())]
    for spec in specs:
        for n in (1, 2):
            g = slice_group(spec, n)
            for _ in range(40):
                f = Gate(spec.q, n, tuple(rng.permutation(spec.q**n).tolist()))
                assert member(f, spec) == g.contains(f.map)
            for _ in range(10):
                e = g.random_element(rng)
                assert member(Gate(spec.q, n, tuple(e.tolist())), spec)


def test_hamming_relation_gives_degenerate_maps():
    for q, n, order in [(2, 2, 8), (2, 3, 48), (3, 2, 72)]:
        g = slice_group(CloneSpec.of(hamming(q)), n)
        assert g.order() == order
        assert g == wreath_group(symmetric_group(q), n)


@pytest.mark.parametrize("rel", [neq(3), iota(3, 3)])
def test_q3_relations_give_degenerate_maps(rel):
    for n, order in [(1, 6), (2, 72)]:
        g = slice_group(CloneSpec.of(rel), n)
        assert g.order() == order and g == wreath_group(symmetric_group(3), n)


def test_all_unary_subsets_with_affine_is_wire_group():
    spec = CloneSpec.of(*all_unary_subsets(3), affine_relation(3))
    assert slice_group(spec, 2) == wire_group(3, 2)


def test_affine_entry_matches_affine_group():
    spec = CloneSpec.of(affine_relation(2))
    for n in (1, 2, 3):
        assert slice_group(spec, n) == affine_group(2, n)


def test_subelementary_chain():
    w = absorbing_example_weight()
    pw = map_monoid(w, mo.annihilate_inf())
    for n, expected in [(1, (1, 2, 6)), (2, (240, 2880, 362880))]:
        a = slice_group(CloneSpec.of(w), n)
        b = slice_group(CloneSpec.of(pw), n)
        top = symmetric_group(3**n)
        assert (a.order(), b.order(), top.order()) == expected
        assert a.is_subgroup_of(b) and b.is_subgroup_of(top)


def test_compare():
    a, top = CloneSpec.of(affine_relation(2)), CloneSpec.of(unary(2, [0, 1]))
    c = compare(a, top, 2)
    assert c.verdict == "equal" and c.first_difference is None
    c = compare(a, top, 3)
    assert c.verdict == "less" and c.first_difference == 3
    c = compare(CloneSpec.of(unary(2, [0])), CloneSpec.of(unary(2, [1])), 2)
    assert c.verdict == "incomparable"
    assert c.to_json()["arity_bound"] == 2


def test_closure_status_examples():
    aff = CloneSpec.of(affine_relation(2), name="A")
    deg = CloneSpec.of(hamming(2), name="Deg")
    p0 = CloneSpec.of(unary(2, [0]), name="P0")
    for spec in (aff, deg, p0):
        r = borrow_closed_up_to(spec, 2, regime="exact")
        assert r.verdict and r.regime == "exact"
    assert ancilla_closed_up_to(aff, 2, regime="exact").verdict
    assert ancilla_closed_up_to(deg, 2, regime="exact").verdict
    rep = ancilla_closed_up_to(p0, 2, regime="exact")
    assert not rep.verdict
    w = rep.witness()
    g = Gate(2, 2, tuple(w["g"]["map"]))
    f = Gate(2, 1, tuple(w["f"]["map"]))
    a = w["ancilla"]
    assert member(g, p0) and not member(f, p0)
    for x in range(2):
        assert g((x, a)) == (f((x,))[0], a)


def test_stabilizer_and_enumeration_agree():
    specs = [CloneSpec.of(unary(2, [0])), CloneSpec.of(neq(2)), CloneSpec.of(affine_relation(2)),
             CloneSpec.of(hamming(2)), CloneSpec.of(Relation.from_tuples(2, ["01", "11"]))]
    for spec in specs:
        for check in (borrow_closed_up_to, ancilla_closed_up_to):
            a = check(spec, 3, regime="enumerate")
            b = check(spec, 3, regime="stabilizer")
            assert a.verdict == b.verdict
        assert (factoring_check(spec, 1, 2, regime="enumerate").verdict
                == factoring_check(spec, 1, 2, regime="stabilizer").verdict)


def test_sampled_regime_is_labelled():
    r = borrow_closed_up_to(CloneSpec.of(neq(2)), 3, regime="sampled", samples=200, seed=1)
    assert r.regime == "sampled" and r.verdict
    assert all(row.samples == 200 for row in r.rows)


def test_split_parallel():
    h = parallel(not_gate(), cnot_gate())
    f, g = split_parallel(h.map, 2, 1, 2)
    assert tuple(f) == not_gate().map and tuple(g) == cnot_gate().map
    assert split_parallel(cnot_gate().map, 2, 1, 1) is None
    assert split_parallel(toffoli_gate().map, 2, 1, 2) is None


def test_factoring_examples():
    for rel in (unary(2, [0]), neq(2), hamming(2)):
        assert factoring_check(CloneSpec.of(rel), 1, 1).verdict
    r = factoring_check(CloneSpec.of(neq(3)), 1, 2, regime="sampled", samples=500, seed=3)
    assert r.verdict and r.regime == "sampled"
    assert factoring_check(CloneSpec.of(neq(3)), 1, 2, regime="exact").verdict


def test_full_clone_examples():
    assert is_full_clone(diagonal(2))
    assert is_full_clone(Relation.from_predicate(2, 2, lambda a, b: True))
    assert not is_full_clone(unary(2, [0]))


def test_full_clone_oracle_small():
    rep = full_clone_relation_oracle(2, 2)
    assert rep.verdict and rep.relations_checked == 3 + 15


def test_cache_is_transparent():
    spec = CloneSpec.of(neq(2))
    a = slice_group(spec, 3)
    clear_cache()
    b = slice_group(spec, 3)
    assert a == b and a is not b


def test_ad_product_equals_intersection():
    from permclone.census import BY_NAME

    ad = BY_NAME["AD"].spec
    both = CloneSpec.of(affine_relation(2), neq(2))
    for n in (1, 2, 3):
        assert slice_group(ad, n) == slice_group(both, n)
