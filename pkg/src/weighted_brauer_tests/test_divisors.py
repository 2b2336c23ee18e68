import pytest

from weighted_brauer.cech import build_double_complex, e_pages
from weighted_brauer.divisors import (
    class_group,
    is_cartier_degree,
    picard_index,
    picard_index_by_search,
    picard_index_from_pages,
    stack_comparison,
)
from weighted_brauer.errors import InvalidInputError
from weighted_brauer.fan import build_fan, random_completion, singular_cones
from weighted_brauer.intlin import FgAbelianGroup
from weighted_brauer.weights import WeightVector, gcd_scale, is_invertible_twist, weight_corpus
from weighted_brauer_tests.conftest import coprime_samples, well_formed_corpus


def fan_of(*rho):
    return build_fan(WeightVector(rho))


@pytest.mark.parametrize("rho", [(1, 1, 2), (1, 1), (2, 3, 5), (1, 2, 4), (3, 4, 5, 7)])
def test_class_group_degrees_are_the_weights(rho):
    data = class_group(fan_of(*rho))
    assert data.group == FgAbelianGroup(free_rank=1)
    assert data.ray_degrees == rho
    assert data.to_dict() == {"rank": 1, "degrees": list(rho)}


def test_class_group_on_well_formed_corpus():
    for w in well_formed_corpus(2, 12) + well_formed_corpus(3, 6):
        data = class_group(build_fan(w))
        assert data.group.free_rank == 1 and not data.group.torsion, w
        assert data.ray_degrees == w.rho, w
    assert len(singular_cones(fan_of(2, 3, 5))) == 3


@pytest.mark.parametrize("rho, index", [
    ((1, 2, 3), 6),
    ((1, 1, 1), 1),
    ((1, 6, 10, 15), 30),
    ((2, 3), 6),
])
def test_picard_index(rho, index):
    data = picard_index(fan_of(*rho))
    assert data.index_in_class_group == index
    assert data.cartier_subgroup_generator_degree == index


def test_picard_index_is_lcm_on_well_formed_corpus():
    for w in well_formed_corpus(2, 12) + well_formed_corpus(3, 12):
        assert picard_index(build_fan(w)).index_in_class_group == w.lcm, w


def test_picard_index_methods_agree():
    corpus = list(weight_corpus(2, 10)) + list(weight_corpus(3, 5))
    for w in corpus:
        if w.gcd != 1:
            continue
        fan = build_fan(w)
        pages = e_pages(build_double_complex(fan))
        direct = picard_index(fan).index_in_class_group
        assert picard_index_by_search(fan) == direct, w
        assert picard_index_from_pages(pages) == direct, w


def test_is_cartier_degree_matches_invertible_twist():
    fan = fan_of(1, 2, 3)
    assert is_cartier_degree(fan, 6)
    assert not is_cartier_degree(fan, 3)
    for w in well_formed_corpus(2, 6):
        fan = build_fan(w)
        for r in range(1, 2 * w.lcm + 1):
            assert is_cartier_degree(fan, r) == is_invertible_twist(w, r), (w, r)


def test_stack_comparison():
    comparison = stack_comparison(WeightVector((1, 2)))
    assert comparison.pullback_multiplier == 2
    assert comparison.stack_picard_generator_twist == 1
    assert comparison.comparison_is_isomorphism(4)
    assert not comparison.comparison_is_isomorphism(3)

    comparison = stack_comparison((2, 3))
    assert comparison.pullback_multiplier == 6
    assert comparison.picard_index == 6
    assert comparison.chart_isomorphisms(4) == [0]
    assert comparison.chart_isomorphisms(6) == [0, 1]
    assert comparison.to_dict()["weights"] == [2, 3]


def test_stack_comparison_requires_coprime_weights():
    with pytest.raises(InvalidInputError):
        stack_comparison((4, 6))
    _, scaled = gcd_scale(WeightVector((4, 6)))
    assert stack_comparison(scaled).pullback_multiplier == 6


def test_divisors_do_not_depend_on_completion(rng):
    for w in coprime_samples(rng, 50, 3, 12):
        base = build_fan(w)
        other = build_fan(w, completion=random_completion(w, rng))
        assert class_group(other) == class_group(base)
        assert picard_index(other) == picard_index(base)
        assert picard_index_by_search(other) == picard_index_by_search(base)
