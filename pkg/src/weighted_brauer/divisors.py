"""
Class group, Picard index and the stack/space Picard comparison.

The Picard index is computed three ways: from compatible Cartier data on the
maximal cones, by searching the least locally principal multiple of a degree-1
class, and from E₂^{−1,1} of the Čech spectral sequence.
"""
import logging
from dataclasses import dataclass
from itertools import combinations

from sympy import divisors

from weighted_brauer.cech import SpectralPages
from weighted_brauer.errors import ConstructionError, InvalidInputError
from weighted_brauer.fan import Fan, build_fan
from weighted_brauer.intlin import (
    FgAbelianGroup,
    IntMatrix,
    cokernel,
    kernel_basis,
    smith_normal_form,
    solve,
    subquotient,
)
from weighted_brauer.utils.common_functions import gcd_all, lcm_all
from weighted_brauer.weights import WeightVector, as_weights

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClassGroupData:
    group: FgAbelianGroup
    ray_degrees: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"rank": self.group.free_rank, "degrees": list(self.ray_degrees)}


@dataclass(frozen=True)
class PicardData:
    cartier_subgroup_generator_degree: int
    index_in_class_group: int

    def to_dict(self) -> dict:
        return {
            "cartier_subgroup_generator_degree": self.cartier_subgroup_generator_degree,
            "index_in_class_group": self.index_in_class_group,
        }


def class_group(fan: Fan) -> ClassGroupData:
    """
    Cl = ℤ^{n+1} / im(Y), with ray degrees oriented to be positive.

    Raises:
        ConstructionError: if the cokernel is not free of rank 1
    """
    size = fan.n + 1
    presented = subquotient(IntMatrix.identity(size), fan.Y)
    group = presented.group
    if group != FgAbelianGroup(free_rank=1):
        raise ConstructionError(f"Class group of {fan.weights} is {group}, expected Z")

    identity = IntMatrix.identity(size)
    degrees = [presented.coordinates(identity.column(i))[0] for i in range(size)]
    if degrees[0] < 0:
        degrees = [-d for d in degrees]
    return ClassGroupData(group=group, ray_degrees=tuple(degrees))


def _cartier_constraints(fan: Fan) -> IntMatrix:
    """Rows ⟨m_J, v_i⟩ − ⟨m_K, v_i⟩ for every pair of cones and every shared ray."""
    n = fan.n
    cones = fan.maximal_cones
    rows = []
    for (a, first), (b, second) in combinations(enumerate(cones), 2):
        for i in set(first) & set(second):
            row = [0] * (n * len(cones))
            for k, x in enumerate(fan.rays[i]):
                row[a * n + k] += x
                row[b * n + k] -= x
            rows.append(row)
    return IntMatrix.from_rows(rows, cols=n * len(cones))


def picard_index(fan: Fan) -> PicardData:
    """
    Index of the Cartier classes in Cl ≅ ℤ.

    Compatible tuples (m_J) form the kernel of the pairing constraints. Each
    kernel vector determines a T-Cartier divisor Σ ⟨m_J, v_i⟩ D_i whose degree
    lies in the Cartier subgroup; the subgroup is generated by their gcd.
    """
    n = fan.n
    cones = fan.maximal_cones
    degrees = class_group(fan).ray_degrees
    compatible = kernel_basis(_cartier_constraints(fan))

    values = []
    for tuple_vector in compatible.columns():
        divisor = []
        for i, ray in enumerate(fan.rays):
            a = next(index for index, cone in enumerate(cones) if i in cone)
            divisor.append(sum(m * x for m, x in zip(tuple_vector[a * n:(a + 1) * n], ray)))
        values.append(sum(d * c for d, c in zip(degrees, divisor)))

    generator = gcd_all(values)
    if generator == 0:
        raise ConstructionError(f"No Cartier class of nonzero degree on {fan.weights}")
    index = cokernel(IntMatrix.from_rows([values], cols=len(values))).order
    logger.debug(f"Cartier subgroup of {fan.weights} generated in degree {generator}")
    return PicardData(cartier_subgroup_generator_degree=generator, index_in_class_group=index)


def _unit_divisor(fan: Fan) -> tuple[int, ...]:
    """A divisor of degree 1."""
    degrees = class_group(fan).ray_degrees
    solution = solve(IntMatrix.from_rows([degrees]), (1,))
    if solution is None:
        raise ConstructionError(f"Ray degrees {degrees} do not generate Z")
    return solution


def _is_locally_principal(fan: Fan, divisor, decompositions: dict) -> bool:
    for cone in fan.maximal_cones:
        local = fan.cone_matrix(cone)
        if cone not in decompositions:
            decompositions[cone] = smith_normal_form(local)
        if solve(local, [divisor[i] for i in cone], decompositions[cone]) is None:
            return False
    return True


def is_cartier_degree(fan: Fan, r: int) -> bool:
    """Whether the class of degree r is Cartier."""
    u = _unit_divisor(fan)
    return _is_locally_principal(fan, [r * x for x in u], {})


def picard_index_by_search(fan: Fan) -> int:
    """Least positive r whose degree-r class is locally principal on every maximal cone."""
    u = _unit_divisor(fan)
    decompositions = {}
    bound = lcm_all(fan.multiplicities)
    for r in divisors(bound):
        if _is_locally_principal(fan, [r * x for x in u], decompositions):
            return int(r)
    raise ConstructionError(f"Degree {bound} is not Cartier on {fan.weights}")


def picard_index_from_pages(pages: SpectralPages) -> int:
    """Index of E₂^{−1,1} inside E₁^{−1,1} = Cl, measured by degree."""
    weights = pages.complex.fan.weights
    locally_principal = pages.e2[(-1, 1)]
    values = [
        sum(r * x for r, x in zip(weights.rho, column))
        for column in locally_principal.generators.columns()
    ]
    index = gcd_all(values)
    if index == 0:
        raise ConstructionError(f"E2^(-1,1) has no class of nonzero degree for {weights}")
    return index


@dataclass(frozen=True)
class StackComparison:
    """Pullback from the space to the stack sends 𝒪(1) to 𝒪(lcm ρ)."""

    weights: WeightVector
    stack_picard_generator_twist: int
    pullback_multiplier: int
    picard_index: int

    def comparison_is_isomorphism(self, ell: int) -> bool:
        return ell % self.pullback_multiplier == 0

    def chart_isomorphisms(self, ell: int) -> list[int]:
        """Charts t_i ≠ 0 on which the comparison for 𝒪(ℓ) is an isomorphism."""
        return [i for i, r in enumerate(self.weights.rho) if ell % r == 0]

    def to_dict(self) -> dict:
        return {
            "weights": list(self.weights.rho),
            "stack_picard_generator_twist": self.stack_picard_generator_twist,
            "pullback_multiplier": self.pullback_multiplier,
            "picard_index": self.picard_index,
        }


def stack_comparison(w) -> StackComparison:
    """
    Compare Pic of the stack (generated by 𝒪(1)) with Pic of the coarse space.

    Raises:
        InvalidInputError: if gcd(ρ) != 1
        ConstructionError: if the Cartier index differs from lcm(ρ)
    """
    w = as_weights(w)
    if w.gcd != 1:
        raise InvalidInputError(f"Weights {w} have gcd {w.gcd}; gcd 1 is required")
    index = picard_index(build_fan(w)).index_in_class_group
    if index != w.lcm:
        raise ConstructionError(f"Picard index {index} of {w} differs from lcm {w.lcm}")
    return StackComparison(
        weights=w,
        stack_picard_generator_twist=1,
        pullback_multiplier=w.lcm,
        picard_index=index,
    )
