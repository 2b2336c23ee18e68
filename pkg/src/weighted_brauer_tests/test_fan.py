import pytest
from sympy import Matrix, factorint

from weighted_brauer.errors import InvalidInputError
from weighted_brauer.fan import (
    build_fan,
    completion_change,
    is_smooth,
    multiplicities,
    random_completion,
    singular_cones,
    unimodular_completion,
    weight_division_transform,
)
from weighted_brauer.intlin import IntMatrix, cokernel
from weighted_brauer.weights import WeightVector, normalize
from weighted_brauer_tests.conftest import coprime_samples, well_formed_corpus


def W(*rho):
    return WeightVector(rho)


@pytest.mark.parametrize("w, expected", [
    (W(1, 2, 4), [[1, 2, 4], [0, 1, 0], [0, 0, 1]]),
    (W(2, 3), [[2, 3], [1, 1]]),
    (W(1, 1), [[1, 1], [0, 1]]),
])
def test_unimodular_completion(w, expected):
    U = unimodular_completion(w)
    assert U.tolist() == expected
    assert U.abs_det() == 1


def test_completion_requires_coprime():
    with pytest.raises(InvalidInputError):
        unimodular_completion(W(4, 6))
    with pytest.raises(InvalidInputError):
        build_fan(W(2, 4, 6))


@pytest.mark.parametrize("w, rays", [
    (W(1, 2, 4), ((-2, -4), (1, 0), (0, 1))),
    (W(1, 1, 2), ((-1, -2), (1, 0), (0, 1))),
    (W(1, 1), ((-1,), (1,))),
    (W(2, 3), ((3,), (-2,))),
])
def test_build_fan_rays(w, rays):
    assert build_fan(w).rays == rays


@pytest.mark.parametrize("w, expected, smooth", [
    (W(1, 1, 2), (1, 1, 2), False),
    (W(2, 3, 5), (2, 3, 5), False),
    (W(1, 1, 1), (1, 1, 1), True),
    (W(2, 3), (2, 3), False),
])
def test_multiplicities(w, expected, smooth):
    fan = build_fan(w)
    assert multiplicities(fan) == expected
    assert is_smooth(fan) is smooth


def test_singular_cones():
    assert singular_cones(build_fan(W(2, 3, 5))) == [(1, 2), (0, 2), (0, 1)]
    assert singular_cones(build_fan(W(1, 1, 1))) == []


def test_fan_invariants_on_well_formed_corpus():
    for w in well_formed_corpus(2, 12) + well_formed_corpus(3, 6):
        fan = build_fan(w)
        weighted_sum = [sum(r * v[k] for r, v in zip(w.rho, fan.rays)) for k in range(fan.n)]
        assert weighted_sum == [0] * fan.n
        assert cokernel(fan.Y).free_rank == 1
        assert fan.multiplicities == w.rho
        assert is_smooth(fan) == (set(normalize(w).normal_form.rho) == {1})


def test_multiplicities_against_sympy_determinants(rng):
    for w in coprime_samples(rng, 40, 4, 15):
        fan = build_fan(w)
        for j, m in enumerate(fan.multiplicities):
            rows = [fan.rays[i] for i in range(len(w)) if i != j]
            assert m == abs(Matrix(rows).det())


def test_completion_change(rng):
    for w in coprime_samples(rng, 25, 3, 20):
        base = build_fan(w)
        other = build_fan(w, completion=random_completion(w, rng))
        assert other.U != base.U
        W_change = completion_change(base, other)
        assert base.Y @ W_change == other.Y
        assert other.multiplicities == base.multiplicities


def test_build_fan_rejects_bad_completion():
    with pytest.raises(InvalidInputError):
        build_fan(W(1, 2), completion=IntMatrix.from_rows([[1, 3], [0, 1]]))
    with pytest.raises(InvalidInputError):
        build_fan(W(1, 2), completion=IntMatrix.from_rows([[1, 2], [0, 2]]))


def test_fan_to_dict():
    payload = build_fan(W(1, 2, 4)).to_dict()
    assert payload["rays"] == [[-2, -4], [1, 0], [0, 1]]
    assert payload["multiplicities"] == [1, 2, 4]


@pytest.mark.parametrize("w, index, d", [
    (W(1, 2, 4), 2, 2),
    (W(1, 2, 4), 1, 2),
    (W(2, 3, 5), 0, 2),
    (W(6, 10, 15), 2, 15),
])
def test_weight_division_transform(w, index, d):
    transform = weight_division_transform(w, index, d)
    assert abs(transform.determinant) == d
    assert list(transform.V[0, :]) == [1] + [0] * w.n
    assert transform.Y_prime * transform.V_double_prime == transform.Y_circ
    assert transform.inverted_primes() <= set(factorint(d))
    assert all(value.q == 1 for value in transform.V_double_prime)
