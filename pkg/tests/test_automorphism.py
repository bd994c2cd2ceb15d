import numpy as np
import pytest

from permclone.automorphism import (ColoredStructure, SearchStats, automorphism_group,
                                    brute_force_automorphisms, brute_force_group,
                                    colored_structure_from_weights, product_factors)
from permclone.groups import wreath_group, symmetric_group
from permclone.relations import Relation, leq_chain, square_relation
from permclone.weights import ResourceLimit, char_weight, endpoint_pair_weight

from helpers import random_structure


def test_square_relation_has_eight_automorphisms():
    s = colored_structure_from_weights(4, 1, [char_weight(square_relation())])
    assert automorphism_group(s).order() == 8


def test_chain_order_is_rigid_at_three_wires():
    s = colored_structure_from_weights(2, 3, [char_weight(leq_chain(2))])
    assert automorphism_group(s).order() == 6


def test_endpoint_pair_weight():
    s = colored_structure_from_weights(2, 2, [endpoint_pair_weight()])
    assert automorphism_group(s).order() == 2


def test_hamming_structure_gives_wreath_group():
    r = Relation.from_predicate(2, 3, lambda a, b, c: a == b or b == c)
    s = colored_structure_from_weights(2, 3, [char_weight(r)])
    g = automorphism_group(s)
    assert g == wreath_group(symmetric_group(2), 3)


def test_trivial_and_empty_structures():
    assert automorphism_group(ColoredStructure(5)).order() == 120
    assert automorphism_group(ColoredStructure(1)).order() == 1
    s = ColoredStructure(4).add_layer(1, [0, 1, 2, 3])
    assert automorphism_group(s).order() == 1


def test_backtrack_matches_brute_force_on_random_structures():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        s = random_structure(rng)
        stats = SearchStats()
        g = automorphism_group(s, stats=stats)
        b = brute_force_group(s)
        assert g == b
        for h in g.gens:
            assert s.is_automorphism(h)


def test_brute_force_lists_every_automorphism_once():
    s = ColoredStructure(4).add_layer(2, (np.arange(16) % 5 == 0).astype(int))
    auts = brute_force_automorphisms(s)
    assert len({tuple(a) for a in auts.tolist()}) == len(auts) == 24


def test_limits():
    with pytest.raises(ResourceLimit):
        brute_force_automorphisms(ColoredStructure(10))
    with pytest.raises(ResourceLimit):
        automorphism_group(ColoredStructure(100), max_points=50)
    with pytest.raises(ValueError):
        automorphism_group(ColoredStructure(3), engine="nope")


def test_product_factors():
    r = Relation.from_tuples(2, ["001", "011", "101", "111"])
    assert [f.k for f in product_factors(r)] == [1, 1, 1]
    assert product_factors(Relation.from_tuples(2, ["01", "10"])) == [Relation.from_tuples(2, ["01", "10"])]


def test_factor_products_preserves_the_group():
    r = Relation.from_tuples(2, ["000", "001", "110", "111"])
    a = automorphism_group(colored_structure_from_weights(2, 2, [char_weight(r)]))
    b = automorphism_group(colored_structure_from_weights(2, 2, [char_weight(r)], factor_products=True))
    assert a == b
