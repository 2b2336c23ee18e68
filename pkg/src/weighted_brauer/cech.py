"""
Two-row Čech double complex of a weighted projective fan and its spectral sequence.

Column p (−1 ≤ p ≤ n) is a sum over index subsets I of size n−p:
    A^{p,0} = ⊕_I ℤⁿ,   A^{p,1} = ⊕_I ℤ^{|I|}.
The vertical map sends m to (⟨m, v_i⟩)_{i∈I}; the horizontal maps restrict
from I to I with its position-k element removed, with sign (−1)^k.

Pages use the horizontal filtration: E₁ is vertical homology, d₁ is induced by
the horizontal maps, and d₂: E₂^{p,1} → E₂^{p+2,0} is evaluated by zig-zag on
explicit witnesses.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Optional

import numpy as np

from weighted_brauer.errors import ConstructionError, InvalidInputError
from weighted_brauer.fan import Fan, build_fan
from weighted_brauer.intlin import (
    FgAbelianGroup,
    GroupHomomorphism,
    IntMatrix,
    PresentedGroup,
    homology,
    image_basis,
    induced_map,
    kernel_basis,
    preimage_basis,
    smith_normal_form,
    solve,
    subquotient,
)
from weighted_brauer.weights import as_weights, gcd_scale

logger = logging.getLogger(__name__)

Position = tuple[int, int]


@dataclass(frozen=True)
class DoubleComplex:
    fan: Fan

    @property
    def n(self) -> int:
        return self.fan.n

    @property
    def columns(self) -> range:
        return range(-1, self.n + 1)

    def subsets(self, p: int) -> tuple[tuple[int, ...], ...]:
        if not -1 <= p <= self.n:
            return ()
        return tuple(combinations(range(self.n + 1), self.n - p))

    def _component_rank(self, q: int, subset: tuple[int, ...]) -> int:
        return self.n if q == 0 else len(subset)

    @cached_property
    def _offsets(self) -> dict:
        offsets = {}
        for p in range(-1, self.n + 1):
            for q in (0, 1):
                offset = 0
                for subset in self.subsets(p):
                    offsets[(p, q, subset)] = offset
                    offset += self._component_rank(q, subset)
                offsets[(p, q)] = offset
        return offsets

    def block_rank(self, p: int, q: int) -> int:
        return self._offsets.get((p, q), 0)

    def component_offset(self, p: int, q: int, subset: tuple[int, ...]) -> int:
        return self._offsets[(p, q, tuple(subset))]

    @cached_property
    def _vertical(self) -> dict:
        return {
            p: IntMatrix.block_diagonal([self.fan.cone_matrix(subset) for subset in self.subsets(p)])
            if self.subsets(p) else IntMatrix.zeros(0, 0)
            for p in range(-2, self.n + 2)
        }

    def d_v(self, p: int) -> IntMatrix:
        """A^{p,0} → A^{p,1}."""
        if p in self._vertical:
            return self._vertical[p]
        return IntMatrix.zeros(0, 0)

    @cached_property
    def _horizontal(self) -> dict:
        return {(p, q): self._build_horizontal(p, q) for p in range(-2, self.n + 1) for q in (0, 1)}

    def _build_horizontal(self, p: int, q: int) -> IntMatrix:
        arr = np.zeros((self.block_rank(p + 1, q), self.block_rank(p, q)), dtype=object)
        for subset in self.subsets(p):
            source = self.component_offset(p, q, subset)
            for position in range(len(subset)):
                face = subset[:position] + subset[position + 1:]
                target = self.component_offset(p + 1, q, face)
                sign = -1 if position % 2 else 1
                if q == 0:
                    for k in range(self.n):
                        arr[target + k, source + k] += sign
                else:
                    for k, element in enumerate(face):
                        arr[target + k, source + subset.index(element)] += sign
        return IntMatrix.from_array(arr)

    def d_h(self, p: int, q: int) -> IntMatrix:
        """A^{p,q} → A^{p+1,q}."""
        if (p, q) in self._horizontal:
            return self._horizontal[(p, q)]
        return IntMatrix.zeros(self.block_rank(p + 1, q), self.block_rank(p, q))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "ranks": {f"{p},{q}": self.block_rank(p, q) for p in self.columns for q in (0, 1)},
        }


def build_double_complex(fan: Fan) -> DoubleComplex:
    """Assemble A^{•,•} and check d_h² = 0 and the commuting squares."""
    dc = DoubleComplex(fan=fan)
    for q in (0, 1):
        for p in range(-2, dc.n):
            if not (dc.d_h(p + 1, q) @ dc.d_h(p, q)).is_zero():
                raise ConstructionError(f"d_h does not square to zero at ({p},{q})")
    for p in range(-1, dc.n):
        if dc.d_v(p + 1) @ dc.d_h(p, 0) != dc.d_h(p, 1) @ dc.d_v(p):
            raise ConstructionError(f"Square at column {p} does not commute")
    logger.debug(f"Double complex for {fan.weights}: {dc.to_dict()['ranks']}")
    return dc


def _homology(f: IntMatrix, g: IntMatrix, where: str) -> PresentedGroup:
    try:
        return homology(f, g)
    except InvalidInputError as e:
        raise ConstructionError(f"{where}: {e}") from e


def row_homology(dc: DoubleComplex) -> dict[Position, FgAbelianGroup]:
    """Horizontal homology at every position of both rows; all zero for a valid complex."""
    return {
        (p, q): _homology(dc.d_h(p - 1, q), dc.d_h(p, q), f"row homology at ({p},{q})").group
        for q in (0, 1)
        for p in dc.columns
    }


@dataclass(frozen=True)
class SpectralPages:
    complex: DoubleComplex
    e1: dict
    d1: dict
    e2: dict
    cycles: dict = field(repr=False)
    boundaries: dict = field(repr=False)

    def group(self, page: int, p: int, q: int) -> FgAbelianGroup:
        entries = {1: self.e1, 2: self.e2}[page]
        if (p, q) not in entries:
            return FgAbelianGroup()
        return entries[(p, q)].group

    def to_dict(self) -> dict:
        n = self.complex.n
        return {
            "E1": {f"{p},{q}": g.group.to_dict() for (p, q), g in sorted(self.e1.items())},
            "E2": {f"{p},{q}": g.group.to_dict() for (p, q), g in sorted(self.e2.items())},
            "d2_iso": all(d2_map(self, p).is_isomorphism for p in range(-1, n - 1)),
        }


def _vertical_cycles(dc: DoubleComplex, p: int, q: int) -> IntMatrix:
    if q == 1:
        return IntMatrix.identity(dc.block_rank(p, 1))
    return kernel_basis(dc.d_v(p))


def _vertical_boundaries(dc: DoubleComplex, p: int, q: int) -> IntMatrix:
    if q == 1:
        return image_basis(dc.d_v(p))
    return IntMatrix.zeros(dc.block_rank(p, 0), 0)


def first_page(dc: DoubleComplex) -> tuple[dict, dict]:
    """E₁ entries (with witnesses) and the induced d₁ maps."""
    e1 = {}
    for p in dc.columns:
        rank0, rank1 = dc.block_rank(p, 0), dc.block_rank(p, 1)
        e1[(p, 0)] = _homology(IntMatrix.zeros(rank0, 0), dc.d_v(p), f"E1 at ({p},0)")
        e1[(p, 1)] = _homology(dc.d_v(p), IntMatrix.zeros(0, rank1), f"E1 at ({p},1)")

    d1 = {}
    for (p, q), source in e1.items():
        if p < dc.n:
            d1[(p, q)] = induced_map(source, e1[(p + 1, q)], dc.d_h(p, q))

    for (p, q), first in d1.items():
        second = d1.get((p + 1, q))
        if second is not None and not first.compose(second).is_zero():
            raise ConstructionError(f"d1 ∘ d1 is nonzero starting at ({p},{q})")
    return e1, d1


def e_pages(dc: DoubleComplex) -> SpectralPages:
    """
    E₁ and E₂ of the horizontal filtration, every entry a PresentedGroup in A^{p,q}.

    E₂^{p,q} is computed inside A^{p,q} as
        {z ∈ Z^{p,q} : d_h z ∈ B^{p+1,q}} / (d_h Z^{p−1,q} + B^{p,q})
    where Z and B are vertical cycles and boundaries.
    """
    e1, d1 = first_page(dc)
    cycles = {(p, q): _vertical_cycles(dc, p, q) for p in dc.columns for q in (0, 1)}
    boundaries = {(p, q): _vertical_boundaries(dc, p, q) for p in dc.columns for q in (0, 1)}

    e2 = {}
    for q in (0, 1):
        for p in dc.columns:
            rank = dc.block_rank(p, q)
            if p < dc.n:
                numerator = preimage_basis(dc.d_h(p, q), cycles[(p, q)], boundaries[(p + 1, q)])
            else:
                numerator = cycles[(p, q)]
            if p > -1:
                incoming = dc.d_h(p - 1, q) @ cycles[(p - 1, q)]
            else:
                incoming = IntMatrix.zeros(rank, 0)
            denominator = IntMatrix.hstack([incoming, boundaries[(p, q)]], rows=rank)
            e2[(p, q)] = subquotient(numerator, denominator)
            logger.debug(f"E2^({p},{q}) = {e2[(p, q)].group}")

    return SpectralPages(complex=dc, e1=e1, d1=d1, e2=e2, cycles=cycles, boundaries=boundaries)


@dataclass(frozen=True)
class D2Map:
    p: int
    source: FgAbelianGroup
    target: FgAbelianGroup
    homomorphism: GroupHomomorphism
    is_isomorphism: bool

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "source": self.source.to_dict(),
            "target": self.target.to_dict(),
            "matrix": self.homomorphism.matrix.tolist(),
            "is_isomorphism": self.is_isomorphism,
        }


def d2_map(pages: SpectralPages, p: int) -> D2Map:
    """
    d₂: E₂^{p,1} → E₂^{p+2,0} by zig-zag on the canonical witnesses.

    For a witness x: solve d_v y = d_h x, then take the class of d_h y.

    Raises:
        InvalidInputError: if p is outside −1 … n−2
        ConstructionError: if a lift does not exist
    """
    dc = pages.complex
    if not -1 <= p <= dc.n - 2:
        raise InvalidInputError(f"d2 is defined for -1 <= p <= {dc.n - 2}, got {p}")
    source = pages.e2[(p, 1)]
    target = pages.e2[(p + 2, 0)]
    lift_matrix = dc.d_v(p + 1)
    lift_snf = smith_normal_form(lift_matrix)

    columns = []
    for x in source.canonical_generators.columns():
        y = solve(lift_matrix, dc.d_h(p, 1).apply(x), lift_snf)
        if y is None:
            raise ConstructionError(f"Zig-zag lift failed at p={p} for witness {x}")
        columns.append(target.coordinates(dc.d_h(p + 1, 0).apply(y)))

    hom = GroupHomomorphism(
        source.orders,
        target.orders,
        IntMatrix.from_columns(columns, rows=len(target.orders)),
    )
    return D2Map(p=p, source=source.group, target=target.group, homomorphism=hom,
                 is_isomorphism=hom.is_isomorphism())


def brauer_group(w) -> FgAbelianGroup:
    """E₂^{0,1} for the gcd-normalized weights."""
    _, normalized = gcd_scale(as_weights(w))
    pages = e_pages(build_double_complex(build_fan(normalized)))
    return pages.group(2, 0, 1)


def cech_cohomology(pages: SpectralPages) -> dict[int, FgAbelianGroup]:
    """E₂^{p,0} = Ȟ^p of the unit sheaf on the standard cover, p = 0 … n."""
    return {p: pages.group(2, p, 0) for p in range(0, pages.complex.n + 1)}


@dataclass(frozen=True)
class DilationAction:
    d: int
    commutes: bool
    e1: dict
    e2: dict

    def is_multiplication_by_d(self) -> bool:
        return all(h.is_scalar(self.d) for h in list(self.e1.values()) + list(self.e2.values()))

    def kernel(self, page: int, p: int, q: int) -> FgAbelianGroup:
        return {1: self.e1, 2: self.e2}[page][(p, q)].kernel()

    def compose(self, after: "DilationAction") -> "DilationAction":
        """Action of after.d · self.d, entry by entry."""
        return DilationAction(
            d=self.d * after.d,
            commutes=self.commutes and after.commutes,
            e1={key: hom.compose(after.e1[key]) for key, hom in self.e1.items()},
            e2={key: hom.compose(after.e2[key]) for key, hom in self.e2.items()},
        )

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "commutes": self.commutes,
            "multiplication_by_d": self.is_multiplication_by_d(),
            "E1_kernels": {f"{p},{q}": h.kernel().to_dict() for (p, q), h in sorted(self.e1.items())},
        }


def dilation_action(dc: DoubleComplex, d: int, pages: Optional[SpectralPages] = None) -> DilationAction:
    """×d on every block, and the maps it induces on E₁ and E₂."""
    if d < 1:
        raise InvalidInputError(f"Dilation factor must be positive, got {d}")
    pages = pages or e_pages(dc)

    def scalar(p: int, q: int) -> IntMatrix:
        return IntMatrix.identity(dc.block_rank(p, q)).scaled(d)

    commutes = all(
        dc.d_v(p) @ scalar(p, 0) == scalar(p, 1) @ dc.d_v(p)
        and dc.d_h(p, q) @ scalar(p, q) == scalar(p + 1, q) @ dc.d_h(p, q)
        for p in dc.columns
        for q in (0, 1)
    )
    e1 = {key: induced_map(g, g, scalar(*key)) for key, g in pages.e1.items()}
    e2 = {key: induced_map(g, g, scalar(*key)) for key, g in pages.e2.items()}
    return DilationAction(d=d, commutes=commutes, e1=e1, e2=e2)
