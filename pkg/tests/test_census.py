import pytest

from permclone.census import (BY_NAME, ENTRIES, REFERENCE_EDGES, WITNESSES, census,
                              collapse_checks, verify_witnesses)
from permclone.clones import member, slice_group
from permclone.gates import not_gate
from permclone.groups import affine_group, symmetric_group, wreath_group


@pytest.fixture(scope="module")
def report():
    return census(3)


def test_names_and_labels():
    assert [e.label for e in ENTRIES] == ["⊤", "D", "DP", "A", "AP₀", "AD", "AP₁", "AP",
                                          "P₀", "P₁", "P", "U", "Π"]
    assert len(BY_NAME) == 13


def test_census_distinct_and_diagram(report):
    assert report.distinct
    assert set(report.edges) == REFERENCE_EDGES
    assert len(report.edges) == 21


def test_orders_at_arity_two(report):
    o = {k: v[1] for k, v in report.orders.items()}
    assert (o["top"], o["A"], o["D"], o["P"], o["Pi"]) == (24, 24, 8, 2, 2)


def test_top_and_affine_first_differ_at_three(report):
    assert report.distinguishing_arity[("A", "top")] == 3
    assert report.orders["A"][2] == 1344 and report.orders["top"][2] == 40320


def test_json_and_dot(report):
    data = report.to_json()
    assert data["count"] == 13 and data["pairwise_distinct"]
    assert data["entries"][0]["orders"] == {"1": "2", "2": "24", "3": "40320"}
    dot = report.to_dot()
    assert dot.startswith("graph census {") and dot.count(" -- ") == 21


def test_structural_identities():
    for n in (1, 2, 3):
        assert slice_group(BY_NAME["A"].spec, n) == affine_group(2, n)
        assert slice_group(BY_NAME["U"].spec, n) == wreath_group(symmetric_group(2), n)


def test_witnesses():
    rep = verify_witnesses()
    assert rep.verdict, rep.discrepancies
    assert len(rep.items) == sum(len(w.members) + len(w.nonmembers) for w in WITNESSES)


def test_witness_examples():
    top = next(w for w in WITNESSES if w.name == "top")
    for name in ("D", "A", "P0", "P1"):
        assert not member(top.gate, BY_NAME[name].spec)
    assert member(not_gate(), BY_NAME["U"].spec)
    assert not member(not_gate(), BY_NAME["Pi"].spec)


def test_collapse_checks():
    rep = collapse_checks(3)
    assert rep["verdict"]
    rows = [r for r in rep["rows"] if r["relation"] in ("T0", "leq") and r["arity"] == 3]
    assert all(r["order"] == "6" for r in rows)


def test_brute_engine_agrees_on_small_arities():
    a = census(2, names=["top", "D", "P0", "P", "Pi"])
    b = census(2, engine="brute", names=["top", "D", "P0", "P", "Pi"])
    assert a.orders == b.orders and a.edges == b.edges
