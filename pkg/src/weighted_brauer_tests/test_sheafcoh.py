from itertools import product

import pytest

from weighted_brauer.errors import InvalidInputError
from weighted_brauer.sheafcoh import (
    cohomology_table,
    euler_characteristic,
    h_dim,
    hilbert_coefficients,
    monomial_basis,
)
from weighted_brauer.weights import WeightVector, twist_transport
from weighted_brauer_tests.conftest import coprime_samples

BOUND = 60


def tally(rho, bound):
    """Brute-force count of exponent vectors e ≥ 0 by degree Σ ρ_i e_i ≤ bound."""
    counts = [0] * (bound + 1)
    for e in product(*(range(bound // r + 1) for r in rho)):
        degree = sum(r * x for r, x in zip(rho, e))
        if degree <= bound:
            counts[degree] += 1
    return counts


@pytest.mark.parametrize("rho, i, ell, expected", [
    ((1, 1), 0, 3, 4),
    ((1, 2, 3), 0, 6, 7),
    ((4, 6), 0, 12, 2),
    ((4, 6), 0, 5, 0),
    ((1, 2, 3), 1, 6, 0),
    ((1, 2, 3), 2, -6, 1),
    ((1, 2, 3), 2, -5, 0),
    ((1, 1, 1), 0, -1, 0),
])
def test_h_dim(rho, i, ell, expected):
    assert h_dim(rho, i, ell) == expected


def test_h_dim_against_tally(rng):
    samples = [tuple(rng.randint(2, 12) for _ in range(3)) for _ in range(5)]
    for rho in [(1, 1), (1, 2), (2, 3), (1, 2, 3), (2, 3, 5), (1, 2, 3, 5)] + samples:
        n = len(rho) - 1
        counts = tally(rho, BOUND)
        for ell in range(-BOUND, BOUND + 1):
            top = -ell - sum(rho)
            expected_top = counts[top] if 0 <= top <= BOUND else 0
            assert h_dim(rho, 0, ell) == (counts[ell] if ell >= 0 else 0), (rho, ell)
            assert h_dim(rho, n, ell) == expected_top, (rho, ell)
            assert all(h_dim(rho, i, ell) == 0 for i in range(1, n)), (rho, ell)


def test_serre_duality():
    for rho in [(1, 2, 4), (2, 3, 5), (3, 4, 5, 7)]:
        n = len(rho) - 1
        for ell in range(-30, 30):
            assert h_dim(rho, n, ell) == h_dim(rho, 0, -ell - sum(rho))


def test_h_dim_is_unchanged_by_twist_transport(rng):
    for w in coprime_samples(rng, 15, 3, 12):
        for ell in range(-40, 41):
            transport = twist_transport(w, ell)
            for i in (0, w.n):
                assert h_dim(w, i, ell) == h_dim(transport.target, i, transport.reduced_twist), (w, ell, i)


def test_stack_flag_gives_same_dimensions():
    for ell in range(-10, 10):
        assert h_dim((2, 3), 0, ell, stack=True) == h_dim((2, 3), 0, ell)
        assert h_dim((2, 3), 1, ell, stack=True) == h_dim((2, 3), 1, ell)


def test_h_dim_rejects_bad_degree():
    with pytest.raises(InvalidInputError):
        h_dim((1, 2, 3), 3, 0)
    with pytest.raises(InvalidInputError):
        h_dim((1, 2, 3), -1, 0)


@pytest.mark.parametrize("rho, i, ell, expected", [
    ((1, 2), 0, 2, [(2, 0), (0, 1)]),
    ((1, 1, 1), 2, -3, [(-1, -1, -1)]),
    ((1, 1, 1), 0, 0, [(0, 0, 0)]),
    ((1, 1), 1, -3, [(-1, -2), (-2, -1)]),
    ((1, 2, 3), 1, 4, []),
])
def test_monomial_basis(rho, i, ell, expected):
    assert monomial_basis(rho, i, ell) == expected


def test_monomial_basis_matches_dimension():
    for rho in [(1, 2, 3), (2, 3, 5)]:
        for ell in range(-25, 25):
            for i in (0, 2):
                basis = monomial_basis(rho, i, ell)
                assert len(basis) == h_dim(rho, i, ell)
                assert len(set(basis)) == len(basis)
                assert basis == sorted(basis, reverse=True)
                for e in basis:
                    assert sum(r * x for r, x in zip(rho, e)) == ell
                    assert all(x >= 0 for x in e) if i == 0 else all(x < 0 for x in e)


def test_monomial_basis_limit():
    with pytest.raises(InvalidInputError):
        monomial_basis((1, 1, 1), 0, 10, limit=5)
    assert len(monomial_basis((1, 1, 1), 0, 2, limit=6)) == 6


def test_hilbert_coefficients():
    assert hilbert_coefficients((1, 1), 4) == [1, 2, 3, 4, 5]
    assert hilbert_coefficients(WeightVector((2, 3)), 6) == [1, 0, 1, 1, 1, 1, 2]
    assert hilbert_coefficients((1, 2), -1) == []


@pytest.mark.parametrize("rho, ell, expected", [
    ((1, 1), 2, 3),
    ((1, 1), -3, -2),
    ((1, 1, 1), -3, 1),
    ((1, 2, 3), -1, 0),
])
def test_euler_characteristic(rho, ell, expected):
    assert euler_characteristic(rho, ell) == expected


def test_cohomology_table():
    table = cohomology_table((1, 2), range(-4, 3), with_basis=True)
    entries = table.entries()
    assert len(entries) == 2 * 7
    by_key = {(e["i"], e["ell"]): e for e in entries}
    assert by_key[(0, 2)]["dim"] == 2
    assert by_key[(0, 2)]["basis"] == [[2, 0], [0, 1]]
    assert by_key[(1, -4)]["basis"] == [[-2, -1]]
    assert by_key[(1, 0)]["dim"] == 0

    payload = cohomology_table((1, 2), [1], degrees=[0], stack=True).to_dict()
    assert payload == {"weights": [1, 2], "stack": True, "table": [{"i": 0, "ell": 1, "dim": 1}]}


def test_twist_limit():
    with pytest.raises(InvalidInputError):
        h_dim((1, 1), 0, 10 ** 9)
    with pytest.raises(InvalidInputError):
        h_dim((1, 1), 1, -10 ** 9)
    with pytest.raises(InvalidInputError):
        monomial_basis((1, 2), 0, 11, twist_limit=10)
    with pytest.raises(InvalidInputError):
        cohomology_table((1, 2), range(-12, 0), twist_limit=10)
    assert h_dim((1, 1), 0, 10, twist_limit=10) == 11
    assert h_dim((1, 1), 1, -10, twist_limit=10) == 9
