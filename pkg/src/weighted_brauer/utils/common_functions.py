import math
from typing import Iterable, Sequence

from sympy import isprime, multiplicity

from weighted_brauer.errors import InvalidInputError


def gcd_all(values: Iterable[int]) -> int:
    """gcd of an iterable, 0 for an empty one."""
    return math.gcd(*values)


def lcm_all(values: Iterable[int]) -> int:
    """lcm of an iterable, 1 for an empty one."""
    return math.lcm(*values)


def leave_one_out(values: Sequence[int], func) -> tuple[int, ...]:
    """
    Apply an aggregate to every sub-sequence obtained by dropping one entry.

    Args:
        values: The sequence to traverse
        func: Aggregate taking an iterable of ints (gcd_all, lcm_all, ...)

    Returns:
        Tuple whose i-th entry is func(values without position i)
    """
    return tuple(func(v for j, v in enumerate(values) if j != i) for i in range(len(values)))


def require_prime(p: int) -> int:
    """Return p unchanged, raising InvalidInputError unless it is prime."""
    if not isinstance(p, int) or not isprime(p):
        raise InvalidInputError(f"Expected a prime, got {p}")
    return p


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise InvalidInputError("Valuation of 0 is undefined")
    return int(multiplicity(p, abs(n)))


def p_part(n: int, p: int) -> int:
    """Largest power of p dividing n."""
    return p ** valuation(n, p)


def modular_inverse(a: int, modulus: int) -> int:
    """Inverse of a modulo modulus, in [0, modulus). Modulus 1 gives 0."""
    if modulus == 1:
        return 0
    return pow(a, -1, modulus)
