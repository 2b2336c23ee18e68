"""
Cohomology of the twists 𝒪(ℓ) on ℙ(ρ) and on the weighted projective stack.

Only H⁰ for ℓ ≥ 0 and Hⁿ for ℓ < 0 are nonzero. H⁰ has the monomials of
degree ℓ as a basis, Hⁿ the Laurent monomials with every exponent negative.
The stack gives the same numbers; the flag is carried into reports.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from weighted_brauer.errors import InvalidInputError
from weighted_brauer.utils.config import DEFAULT_SETTINGS
from weighted_brauer.weights import WeightVector, as_weights

logger = logging.getLogger(__name__)

Exponents = tuple[int, ...]


@lru_cache(maxsize=4096)
def _nonnegative_count(rho: tuple[int, ...], total: int) -> int:
    """#{e ≥ 0 : Σ ρ_i e_i = total}, the coefficient of x^total in ∏(1 − x^ρ_i)⁻¹."""
    if total < 0:
        return 0
    return _coefficients(rho, total)[total]


def _coefficients(rho: tuple[int, ...], up_to: int) -> list[int]:
    counts = [1] + [0] * up_to
    for r in rho:
        for t in range(r, up_to + 1):
            counts[t] += counts[t - r]
    return counts


def hilbert_coefficients(w, up_to: int) -> list[int]:
    """h⁰(𝒪(ℓ)) for ℓ = 0 … up_to."""
    w = as_weights(w)
    if up_to < 0:
        return []
    return _coefficients(w.rho, up_to)


def _check_degree(w: WeightVector, i: int) -> None:
    if not 0 <= i <= w.n:
        raise InvalidInputError(f"Cohomological degree must lie in [0, {w.n}], got {i}")


def _check_twist(ell: int, twist_limit: int) -> None:
    if abs(ell) > twist_limit:
        raise InvalidInputError(f"Twist {ell} exceeds the limit of {twist_limit} in absolute value")


def h_dim(w, i: int, ell: int, stack: bool = False,
          twist_limit: int = DEFAULT_SETTINGS["twist_limit"]) -> int:
    """
    Rank of H^i(𝒪(ℓ)).

    Args:
        w: Weights
        i: Cohomological degree, 0 ≤ i ≤ n
        ell: Twist
        stack: Compute on the stack instead of the coarse space
        twist_limit: Largest |ℓ| accepted

    Returns:
        Nonnegative integer

    Raises:
        InvalidInputError: if i is out of range or |ℓ| exceeds twist_limit
    """
    w = as_weights(w)
    _check_degree(w, i)
    _check_twist(ell, twist_limit)
    if i == 0 and ell >= 0:
        return _nonnegative_count(w.rho, ell)
    if i == w.n and ell < 0:
        return _nonnegative_count(w.rho, -ell - sum(w.rho))
    return 0


def _solutions(rho: tuple[int, ...], total: int, descending: bool) -> Iterator[Exponents]:
    """Nonnegative solutions of Σ ρ_i e_i = total in lexicographic order."""
    if not rho:
        if total == 0:
            yield ()
        return
    first, rest = rho[0], rho[1:]
    top = total // first
    values = range(top, -1, -1) if descending else range(0, top + 1)
    for e in values:
        remainder = total - first * e
        if rest and _nonnegative_count(rest, remainder) == 0:
            continue
        for tail in _solutions(rest, remainder, descending):
            yield (e,) + tail


def monomial_basis(w, i: int, ell: int, stack: bool = False,
                   limit: int = DEFAULT_SETTINGS["basis_limit"],
                   twist_limit: int = DEFAULT_SETTINGS["twist_limit"]) -> list[Exponents]:
    """
    Exponent vectors of the monomial basis of H^i(𝒪(ℓ)), in descending lexicographic order.

    Raises:
        InvalidInputError: if i or ℓ is out of range or the basis is larger than limit
    """
    w = as_weights(w)
    count = h_dim(w, i, ell, stack=stack, twist_limit=twist_limit)
    if count > limit:
        raise InvalidInputError(f"Basis of size {count} exceeds the limit of {limit}")
    if count == 0:
        return []
    if i == 0:
        return list(_solutions(w.rho, ell, descending=True))
    # e_i = −1 − f_i turns all-negative exponents into nonnegative ones
    shifted = -ell - sum(w.rho)
    return [tuple(-1 - f for f in solution) for solution in _solutions(w.rho, shifted, descending=False)]


@dataclass(frozen=True)
class CohomologyTable:
    weights: WeightVector
    stack: bool
    rows: dict
    bases: Optional[dict] = field(default=None)

    def entries(self) -> list[dict]:
        out = []
        for (i, ell), dim in sorted(self.rows.items()):
            entry = {"i": i, "ell": ell, "dim": dim}
            if self.bases is not None:
                entry["basis"] = [list(e) for e in self.bases[(i, ell)]]
            out.append(entry)
        return out

    def to_dict(self) -> dict:
        return {"weights": list(self.weights.rho), "stack": self.stack, "table": self.entries()}


def cohomology_table(w, ells: Iterable[int], degrees: Optional[Iterable[int]] = None,
                     stack: bool = False, with_basis: bool = False,
                     limit: int = DEFAULT_SETTINGS["basis_limit"],
                     twist_limit: int = DEFAULT_SETTINGS["twist_limit"]) -> CohomologyTable:
    """Dimensions (and optionally bases) for every degree in `degrees` and twist in `ells`."""
    w = as_weights(w)
    degrees = list(range(w.n + 1)) if degrees is None else list(degrees)
    ells = list(ells)
    rows = {}
    bases = {} if with_basis else None
    for i in degrees:
        for ell in ells:
            rows[(i, ell)] = h_dim(w, i, ell, stack=stack, twist_limit=twist_limit)
            if with_basis:
                bases[(i, ell)] = monomial_basis(w, i, ell, stack=stack, limit=limit, twist_limit=twist_limit)
    logger.debug(f"Cohomology table for {w}: {len(rows)} entries")
    return CohomologyTable(weights=w, stack=stack, rows=rows, bases=bases)


def euler_characteristic(w, ell: int) -> int:
    """χ(𝒪(ℓ)) = h⁰ + (−1)ⁿ hⁿ."""
    w = as_weights(w)
    return h_dim(w, 0, ell) + (-1) ** w.n * h_dim(w, w.n, ell)
