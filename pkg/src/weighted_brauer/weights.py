"""
Weight-vector arithmetic for weighted projective spaces.

Covers gcd scaling, the Delorme reduction to well-formed weights, condition (N),
isomorphism testing, transport of twists through a reduction step, and p-reduction.
"""
import logging
import numbers
from itertools import combinations_with_replacement
from dataclasses import dataclass
from typing import Iterable

from weighted_brauer.errors import ConstructionError, InvalidInputError
from weighted_brauer.utils.common_functions import (
    gcd_all,
    lcm_all,
    leave_one_out,
    modular_inverse,
    p_part,
    require_prime,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightVector:
    """Positive integer weights (ρ₀, …, ρ_n), n ≥ 1."""

    rho: tuple[int, ...]

    def __post_init__(self):
        rho = tuple(self.rho)
        if len(rho) < 2:
            raise InvalidInputError(f"At least 2 weights are required, got {len(rho)}")
        for r in rho:
            if isinstance(r, bool) or not isinstance(r, numbers.Integral):
                raise InvalidInputError(f"Weights must be integers, got {r!r}")
            if r < 1:
                raise InvalidInputError(f"Weights must be positive, got {r}")
        object.__setattr__(self, "rho", tuple(int(r) for r in rho))

    @classmethod
    def of(cls, *weights: int) -> "WeightVector":
        return cls(tuple(weights))

    @property
    def n(self) -> int:
        return len(self.rho) - 1

    @property
    def gcd(self) -> int:
        return gcd_all(self.rho)

    @property
    def lcm(self) -> int:
        return lcm_all(self.rho)

    def sorted(self) -> "WeightVector":
        return WeightVector(tuple(sorted(self.rho)))

    def __len__(self) -> int:
        return len(self.rho)

    def __iter__(self):
        return iter(self.rho)

    def __getitem__(self, index):
        return self.rho[index]

    def __str__(self) -> str:
        return "(" + ", ".join(str(r) for r in self.rho) + ")"


def as_weights(value) -> WeightVector:
    """Accept a WeightVector or any integer sequence."""
    if isinstance(value, WeightVector):
        return value
    return WeightVector(tuple(value))


@dataclass(frozen=True)
class DelormeStep:
    input: WeightVector
    d: tuple[int, ...]
    s_each: tuple[int, ...]
    s: int
    output: WeightVector

    def to_dict(self) -> dict:
        return {
            "input": list(self.input.rho),
            "d": list(self.d),
            "s_each": list(self.s_each),
            "s": self.s,
            "output": list(self.output.rho),
        }


@dataclass(frozen=True)
class NormalizationReport:
    input: WeightVector
    gcd: int
    gcd_divided: WeightVector
    steps: tuple[DelormeStep, ...]
    normal_form: WeightVector
    total_s: int

    def to_dict(self) -> dict:
        return {
            "input": list(self.input.rho),
            "gcd": self.gcd,
            "gcd_divided": list(self.gcd_divided.rho),
            "steps": [step.to_dict() for step in self.steps],
            "normal_form": list(self.normal_form.rho),
            "total_s": self.total_s,
            "satisfies_N": satisfies_N(self.normal_form),
        }


@dataclass(frozen=True)
class TwistTransport:
    """Data carrying 𝒪(ℓ) on ℙ(ρ) to 𝒪(ℓ′/s) on ℙ(ρ′) through one reduction step."""

    weights: WeightVector
    ell: int
    d: tuple[int, ...]
    b: tuple[int, ...]
    c: tuple[int, ...]
    ell_prime: int
    s: int
    reduced_twist: int
    target: WeightVector

    @property
    def monomial(self) -> tuple[int, ...]:
        return self.b

    @property
    def monomial_text(self) -> str:
        factors = []
        for index, exponent in enumerate(self.b):
            if exponent == 1:
                factors.append(f"t{index}")
            elif exponent > 1:
                factors.append(f"t{index}^{exponent}")
        return "*".join(factors) or "1"

    def to_dict(self) -> dict:
        return {
            "weights": list(self.weights.rho),
            "ell": self.ell,
            "d": list(self.d),
            "b": list(self.b),
            "c": list(self.c),
            "ell_prime": self.ell_prime,
            "s": self.s,
            "monomial": list(self.monomial),
            "monomial_text": self.monomial_text,
            "reduced_twist": self.reduced_twist,
            "target": list(self.target.rho),
        }


def satisfies_N(w: WeightVector) -> bool:
    """Condition (N): every leave-one-out gcd equals 1."""
    return all(g == 1 for g in leave_one_out(w.rho, gcd_all))


def gcd_scale(w: WeightVector) -> tuple[int, WeightVector]:
    """Divide all weights by their gcd; returns (gcd, scaled weights)."""
    g = w.gcd
    return g, WeightVector(tuple(r // g for r in w.rho))


def _require_coprime(w: WeightVector) -> None:
    if w.gcd != 1:
        raise InvalidInputError(f"Weights {w} have gcd {w.gcd}; gcd 1 is required")


def delorme_step(w: WeightVector) -> DelormeStep:
    """One reduction step ρ ↦ ρ′ with ρ′_i = ρ_i / s_i."""
    _require_coprime(w)
    d = leave_one_out(w.rho, gcd_all)
    s_each = leave_one_out(d, lcm_all)
    s = lcm_all(s_each)
    if any(r % si for r, si in zip(w.rho, s_each)):
        raise ConstructionError(f"s_i does not divide ρ_i for {w}")
    output = WeightVector(tuple(r // si for r, si in zip(w.rho, s_each)))
    if w.lcm != s * output.lcm:
        raise ConstructionError(f"lcm identity fails for {w}: {w.lcm} != {s} * {output.lcm}")
    logger.debug(f"Delorme step {w} -> {output} with d={d}, s_each={s_each}, s={s}")
    return DelormeStep(input=w, d=d, s_each=s_each, s=s, output=output)


def normalize(w: WeightVector) -> NormalizationReport:
    """Divide by the gcd, then apply Delorme steps until (N) holds."""
    g, current = gcd_scale(w)
    gcd_divided = current
    steps = []
    total_s = 1
    while not satisfies_N(current):
        step = delorme_step(current)
        steps.append(step)
        total_s *= step.s
        current = step.output
    return NormalizationReport(
        input=w,
        gcd=g,
        gcd_divided=gcd_divided,
        steps=tuple(steps),
        normal_form=current,
        total_s=total_s,
    )


def is_isomorphic(w1: WeightVector, w2: WeightVector) -> bool:
    """ℙ(w1) ≅ ℙ(w2) iff the normal forms agree up to permutation."""
    return sorted(normalize(w1).normal_form.rho) == sorted(normalize(w2).normal_form.rho)


def twist_transport(w: WeightVector, ell: int) -> TwistTransport:
    """
    Split ℓ as b_i·ρ_i + c_i·d_i for every i and collect the reduced twist.

    Args:
        w: Weights with gcd 1
        ell: Twist on ℙ(w)

    Returns:
        TwistTransport whose reduced_twist lives on the output of one Delorme step

    Raises:
        InvalidInputError: if gcd(w) != 1
    """
    step = delorme_step(w)
    b = tuple((ell * modular_inverse(r, di)) % di for r, di in zip(w.rho, step.d))
    for r, di, bi in zip(w.rho, step.d, b):
        if (ell - bi * r) % di:
            raise ConstructionError(f"Residue {bi} does not split {ell} for weight {r} and d={di}")
    c = tuple((ell - bi * r) // di for r, di, bi in zip(w.rho, step.d, b))
    ell_prime = ell - sum(bi * r for bi, r in zip(b, w.rho))
    if ell_prime % step.s:
        raise ConstructionError(f"s={step.s} does not divide ell'={ell_prime} for {w}")
    return TwistTransport(
        weights=w,
        ell=ell,
        d=step.d,
        b=b,
        c=c,
        ell_prime=ell_prime,
        s=step.s,
        reduced_twist=ell_prime // step.s,
        target=step.output,
    )


def divide_weight(w: WeightVector, index: int, d: int) -> WeightVector:
    """Replace ρ_index by ρ_index / d; d must divide it."""
    if not 0 <= index < len(w):
        raise InvalidInputError(f"Index {index} out of range for {w}")
    if d < 1 or w.rho[index] % d:
        raise InvalidInputError(f"{d} does not divide weight {w.rho[index]}")
    rho = list(w.rho)
    rho[index] //= d
    return WeightVector(tuple(rho))


def p_reduce(w: WeightVector, p: int) -> WeightVector:
    """Strip every prime-to-p factor: ρ_i ↦ p^{v_p(ρ_i)}."""
    require_prime(p)
    current = w
    for index, r in enumerate(w.rho):
        cofactor = r // p_part(r, p)
        if cofactor > 1:
            current = divide_weight(current, index, cofactor)
    return current


def is_invertible_twist(w: WeightVector, r: int) -> bool:
    """𝒪(r) is invertible on ℙ(w) iff lcm(w) | r; w must satisfy (N)."""
    if not satisfies_N(w):
        raise InvalidInputError(f"Weights {w} do not satisfy condition (N)")
    return r % w.lcm == 0


def weight_corpus(n: int, max_weight: int) -> Iterable[WeightVector]:
    """All weight vectors of length n+1 with entries in [1, max_weight], up to permutation."""
    for rho in combinations_with_replacement(range(1, max_weight + 1), n + 1):
        yield WeightVector(rho)
