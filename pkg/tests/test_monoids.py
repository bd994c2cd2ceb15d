import pytest

from permclone import monoids as mo
from permclone.monoids import INF, MonoidError, TableMonoid, TableSemiring


def test_builtins():
    assert mo.NAT_ADD.product([1, 2, 3]) == 6
    assert mo.NAT_MUL.product([]) == 1
    assert mo.NAT_ADD_INF.op(3, INF) is INF
    assert mo.BOOL_AND.product([1, 1, 0]) == 0
    assert mo.BOOL_OR.product([0, 0]) == 0
    big = 10**40
    assert mo.NAT_MUL.op(big, big) == 10**80
    assert not mo.NAT_ADD.contains(-1)
    assert not mo.NAT_ADD.contains(INF)


def test_table_monoid_valid():
    z3 = mo.cyclic_group(3)
    assert z3.op(2, 2) == 1
    assert z3.identity == 0


def test_table_monoid_rejects_bad_tables():
    with pytest.raises(MonoidError, match="commutative"):
        TableMonoid(["e", "a", "b"], "e", [["e", "a", "b"], ["a", "a", "a"], ["b", "b", "b"]])
    with pytest.raises(MonoidError, match="identity"):
        TableMonoid([0, 1], 0, [[1, 0], [0, 1]])
    # commutative with identity but not associative
    with pytest.raises(MonoidError, match="associative"):
        TableMonoid([0, 1, 2], 0, [[0, 1, 2], [1, 2, 2], [2, 2, 1]])
    with pytest.raises(MonoidError):
        TableMonoid([0, 1], 0, [[0, 1], [1, 5]])


def test_json_roundtrip():
    for m in (mo.NAT_ADD, mo.cyclic_group(2), mo.ProductMonoid([mo.BOOL_AND, mo.NAT_ADD])):
        assert mo.monoid_from_json(m.to_json()) == m
    with pytest.raises(MonoidError):
        mo.monoid_from_json("nope")


def test_homomorphisms():
    phi = mo.annihilate_inf()
    assert phi(INF) == 0 and phi(7) == 1
    mo.power_hom(2).validate_on([0, 1, INF])
    assert mo.scale_hom(3)(2) == 6
    assert mo.scale_hom(3, mo.NAT_MUL)(2) == 9
    z2 = mo.cyclic_group(2)
    mo.table_hom(z2, z2, {0: 0, 1: 1})
    with pytest.raises(MonoidError):
        mo.table_hom(z2, z2, {0: 1, 1: 0})
    with pytest.raises(MonoidError):
        mo.MonoidHom(mo.NAT_ADD, mo.NAT_ADD, lambda x: x * x).validate_on([1, 2])


def test_level_indicator_only_valid_below_the_diagonal():
    p = mo.ProductMonoid([mo.NAT_ADD, mo.NAT_ADD])
    ind = mo.level_indicator(p)
    ind.validate_on([(1, 2), (2, 2), (0, 2)])
    with pytest.raises(MonoidError):
        ind.validate_on([(3, 2), (1, 2)])
    assert ind((4, 4)) == 1 and ind((3, 4)) == 0
    assert mo.ratio(1, 0) is INF


def test_semirings():
    assert mo.NAT_SEMIRING.sum([1, 2]) == 3
    assert mo.BOOL_SEMIRING.sum([0, 1]) == 1
    b = mo.TableMonoid([0, 1], 1, [[0, 0], [0, 1]])
    TableSemiring(b, [[0, 1], [1, 1]], 0)
    with pytest.raises(MonoidError, match="distributive"):
        # (Z2, +) as addition over (and) is distributive, but xor with or-multiplication is not
        TableSemiring(mo.TableMonoid([0, 1], 0, [[0, 1], [1, 1]]), [[0, 1], [1, 0]], 0)
