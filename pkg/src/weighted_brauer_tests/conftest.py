import random
from itertools import product

import pytest

from weighted_brauer.cech import build_double_complex, e_pages
from weighted_brauer.fan import build_fan
from weighted_brauer.weights import WeightVector, satisfies_N, weight_corpus

SEED = 1729


@pytest.fixture
def rng():
    return random.Random(SEED)


def pages_of(*weights):
    return e_pages(build_double_complex(build_fan(WeightVector(weights))))


def well_formed_corpus(n, max_weight):
    return [w for w in weight_corpus(n, max_weight) if satisfies_N(w)]


def coprime_samples(rng, count, length, max_weight):
    samples = []
    while len(samples) < count:
        w = WeightVector(tuple(rng.randint(1, max_weight) for _ in range(length)))
        if w.gcd == 1:
            samples.append(w)
    return samples


def prime_power_corpus(p, max_n, max_exponent):
    """(1, p^e₁, …, p^e_n) with nondecreasing exponents."""
    corpus = []
    for n in range(1, max_n + 1):
        for exponents in product(range(max_exponent + 1), repeat=n):
            if list(exponents) == sorted(exponents):
                corpus.append((exponents, WeightVector((1,) + tuple(p ** e for e in exponents))))
    return corpus
