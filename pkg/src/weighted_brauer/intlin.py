"""
Exact integer linear algebra.

Matrices are immutable tuples of Python ints; elimination runs on numpy object
arrays so entries never overflow. Every other module builds on the Smith
normal form implemented here: cokernels, integer solving, kernels and images,
homology of complexes with explicit witnesses, and homomorphisms between
finitely generated abelian groups in canonical form.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from math import prod
from typing import Iterable, Optional, Sequence

import numpy as np

from weighted_brauer.errors import ConstructionError, InvalidInputError
from weighted_brauer.utils.common_functions import p_part, require_prime

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]


def _eye(n: int) -> np.ndarray:
    arr = np.zeros((n, n), dtype=object)
    for i in range(n):
        arr[i, i] = 1
    return arr


@dataclass(frozen=True)
class IntMatrix:
    """Integer matrix with explicit shape, so 0×k and k×0 matrices are representable."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise InvalidInputError(f"Negative matrix shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise InvalidInputError(f"Entries do not match shape {self.rows}x{self.cols}")

    # construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        entries = tuple(tuple(int(x) for x in row) for row in rows)
        if cols is None:
            if not entries:
                raise InvalidInputError("Column count is required for a matrix without rows")
            cols = len(entries[0])
        return cls(len(entries), cols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        columns = [tuple(int(x) for x in col) for col in columns]
        if any(len(col) != rows for col in columns):
            raise InvalidInputError(f"Every column must have {rows} entries")
        entries = tuple(tuple(col[i] for col in columns) for i in range(rows))
        return cls(rows, len(columns), entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.diagonal([1] * n)

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: Optional[int] = None, cols: Optional[int] = None) -> "IntMatrix":
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        entries = tuple(
            tuple(int(values[i]) if i == j and i < len(values) else 0 for j in range(cols))
            for i in range(rows)
        )
        return cls(rows, cols, entries)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "IntMatrix":
        rows, cols = arr.shape
        return cls(rows, cols, tuple(tuple(int(arr[i, j]) for j in range(cols)) for i in range(rows)))

    @classmethod
    def hstack(cls, blocks: Sequence["IntMatrix"], rows: int) -> "IntMatrix":
        if any(b.rows != rows for b in blocks):
            raise InvalidInputError("hstack blocks must share the row count")
        entries = tuple(tuple(x for b in blocks for x in b.entries[i]) for i in range(rows))
        return cls(rows, sum(b.cols for b in blocks), entries)

    @classmethod
    def vstack(cls, blocks: Sequence["IntMatrix"], cols: int) -> "IntMatrix":
        if any(b.cols != cols for b in blocks):
            raise InvalidInputError("vstack blocks must share the column count")
        entries = tuple(row for b in blocks for row in b.entries)
        return cls(len(entries), cols, entries)

    @classmethod
    def block_diagonal(cls, blocks: Sequence["IntMatrix"]) -> "IntMatrix":
        total_cols = sum(b.cols for b in blocks)
        entries = []
        offset = 0
        for b in blocks:
            for row in b.entries:
                entries.append((0,) * offset + row + (0,) * (total_cols - offset - b.cols))
            offset += b.cols
        return cls(len(entries), total_cols, tuple(entries))

    # access

    def to_array(self) -> np.ndarray:
        arr = np.zeros((self.rows, self.cols), dtype=object)
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                arr[i, j] = x
        return arr

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def select_rows(self, indices: Iterable[int]) -> "IntMatrix":
        return IntMatrix.from_rows([self.entries[i] for i in indices], cols=self.cols)

    def select_columns(self, indices: Iterable[int]) -> "IntMatrix":
        indices = list(indices)
        return IntMatrix(self.rows, len(indices), tuple(tuple(row[j] for j in indices) for row in self.entries))

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_columns(self.entries, rows=self.cols)

    # arithmetic

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise InvalidInputError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        if self.rows == 0 or self.cols == 0 or other.cols == 0:
            return IntMatrix.zeros(self.rows, other.cols)
        return IntMatrix.from_array(self.to_array().dot(other.to_array()))

    def apply(self, vector: Sequence[int]) -> Vector:
        """Matrix-vector product."""
        if len(vector) != self.cols:
            raise InvalidInputError(f"Vector of length {len(vector)} does not fit {self.rows}x{self.cols}")
        return tuple(sum(a * int(b) for a, b in zip(row, vector)) for row in self.entries)

    def scaled(self, factor: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(factor * x for x in row) for row in self.entries))

    def __neg__(self) -> "IntMatrix":
        return self.scaled(-1)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InvalidInputError("Shape mismatch in subtraction")
        return IntMatrix(self.rows, self.cols, tuple(
            tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)
        ))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def abs_det(self) -> int:
        """|det| of a square matrix, read off the Smith normal form."""
        if self.rows != self.cols:
            raise InvalidInputError(f"Determinant of non-square {self.rows}x{self.cols} matrix")
        snf = smith_normal_form(self)
        return prod(snf.invariant_factors) if snf.rank == self.rows else 0


@dataclass(frozen=True)
class SmithDecomposition:
    """L·M·R = D with unimodular L, R and d₁ | d₂ | … on the diagonal of D."""

    D: IntMatrix
    L: IntMatrix
    R: IntMatrix
    invariant_factors: tuple[int, ...]
    L_inv: IntMatrix
    R_inv: IntMatrix

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def _min_abs_position(D: np.ndarray, positions: Iterable[tuple[int, int]]) -> Optional[tuple[int, int]]:
    best = None
    best_value = None
    for i, j in positions:
        value = abs(D[i, j])
        if value and (best_value is None or value < best_value):
            best, best_value = (i, j), value
    return best


def smith_normal_form(matrix: IntMatrix) -> SmithDecomposition:
    """
    Deterministic Smith normal form with transformation matrices.

    The pivot is always the nonzero entry of least absolute value, scanning rows
    then columns, so equal inputs give equal decompositions.

    Args:
        matrix: Any integer matrix, possibly empty

    Returns:
        SmithDecomposition with L·matrix·R = D and the inverses of L and R
    """
    m, n = matrix.rows, matrix.cols
    D = matrix.to_array()
    L, L_inv = _eye(m), _eye(m)
    R, R_inv = _eye(n), _eye(n)

    def swap_rows(i, j):
        if i != j:
            D[[i, j]] = D[[j, i]]
            L[[i, j]] = L[[j, i]]
            L_inv[:, [i, j]] = L_inv[:, [j, i]]

    def swap_cols(i, j):
        if i != j:
            D[:, [i, j]] = D[:, [j, i]]
            R[:, [i, j]] = R[:, [j, i]]
            R_inv[[i, j]] = R_inv[[j, i]]

    def add_row(target, source, c):
        D[target] = D[target] + c * D[source]
        L[target] = L[target] + c * L[source]
        L_inv[:, source] = L_inv[:, source] - c * L_inv[:, target]

    def add_col(target, source, c):
        D[:, target] = D[:, target] + c * D[:, source]
        R[:, target] = R[:, target] + c * R[:, source]
        R_inv[source] = R_inv[source] - c * R_inv[target]

    def move_to_pivot(t, position):
        i, j = position
        swap_rows(t, i)
        swap_cols(t, j)

    t = 0
    while t < min(m, n):
        pivot = _min_abs_position(D, ((i, j) for i in range(t, m) for j in range(t, n)))
        if pivot is None:
            break
        move_to_pivot(t, pivot)

        while True:
            for i in range(t + 1, m):
                if D[i, t] != 0:
                    add_row(i, t, -(D[i, t] // D[t, t]))
            for j in range(t + 1, n):
                if D[t, j] != 0:
                    add_col(j, t, -(D[t, j] // D[t, t]))

            leftover = _min_abs_position(
                D, sorted([(i, t) for i in range(t + 1, m)] + [(t, j) for j in range(t + 1, n)])
            )
            if leftover is not None:
                move_to_pivot(t, leftover)
                continue

            offender = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i, j] % D[t, t] != 0),
                None,
            )
            if offender is not None:
                add_row(t, offender[0], 1)
                continue
            break

        if D[t, t] < 0:
            D[t] = -D[t]
            L[t] = -L[t]
            L_inv[:, t] = -L_inv[:, t]
        t += 1

    invariant_factors = tuple(int(D[k, k]) for k in range(t))
    decomposition = SmithDecomposition(
        D=IntMatrix.from_array(D),
        L=IntMatrix.from_array(L),
        R=IntMatrix.from_array(R),
        invariant_factors=invariant_factors,
        L_inv=IntMatrix.from_array(L_inv),
        R_inv=IntMatrix.from_array(R_inv),
    )
    if decomposition.L @ matrix @ decomposition.R != decomposition.D:
        raise ConstructionError(f"Smith decomposition check failed on a {m}x{n} matrix")
    return decomposition


@dataclass(frozen=True)
class FgAbelianGroup:
    """ℤ^free_rank ⊕ ℤ/t₁ ⊕ … ⊕ ℤ/t_k with t₁ | t₂ | … and every t_i ≥ 2."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.free_rank < 0:
            raise InvalidInputError(f"Negative free rank {self.free_rank}")
        if any(t < 2 for t in self.torsion):
            raise InvalidInputError(f"Invariant factors must be at least 2, got {self.torsion}")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise InvalidInputError(f"Invariant factors {self.torsion} do not form a divisibility chain")

    @classmethod
    def from_cyclic_orders(cls, orders: Sequence[int]) -> "FgAbelianGroup":
        """Canonical form of ⊕ ℤ/o_i, where o_i = 0 stands for ℤ."""
        return cokernel(IntMatrix.diagonal(list(orders)))

    @property
    def order(self) -> Optional[int]:
        return None if self.free_rank else prod(self.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def to_dict(self) -> dict:
        return {"rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        if self.is_trivial:
            return "0"
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts)


def cokernel(matrix: IntMatrix) -> FgAbelianGroup:
    """ℤ^rows / column span, in canonical form."""
    snf = smith_normal_form(matrix)
    return FgAbelianGroup(
        free_rank=matrix.rows - snf.rank,
        torsion=tuple(d for d in snf.invariant_factors if d > 1),
    )


def solve(matrix: IntMatrix, b: Sequence[int], decomposition: Optional[SmithDecomposition] = None) -> Optional[Vector]:
    """
    Integer solution of matrix·x = b, or None when there is none.

    Args:
        matrix: Coefficient matrix
        b: Right-hand side, one entry per row
        decomposition: Precomputed Smith decomposition of matrix, if at hand

    Returns:
        A solution vector, or None
    """
    if len(b) != matrix.rows:
        raise InvalidInputError(f"Right-hand side has {len(b)} entries, matrix has {matrix.rows} rows")
    snf = decomposition or smith_normal_form(matrix)
    c = snf.L.apply(b)
    y = [0] * matrix.cols
    for k, d in enumerate(snf.invariant_factors):
        if c[k] % d:
            return None
        y[k] = c[k] // d
    if any(c[k] for k in range(snf.rank, matrix.rows)):
        return None
    return snf.R.apply(y)


def kernel_basis(matrix: IntMatrix) -> IntMatrix:
    """Columns form a basis of the integer kernel."""
    snf = smith_normal_form(matrix)
    return snf.R.select_columns(range(snf.rank, matrix.cols))


def image_basis(matrix: IntMatrix) -> IntMatrix:
    """Columns form a basis of the column span."""
    snf = smith_normal_form(matrix)
    columns = [
        tuple(d * x for x in snf.L_inv.column(k))
        for k, d in enumerate(snf.invariant_factors)
    ]
    return IntMatrix.from_columns(columns, rows=matrix.rows)


def preimage_basis(f: IntMatrix, domain_gens: IntMatrix, target_gens: IntMatrix) -> IntMatrix:
    """
    Basis of {z ∈ span(domain_gens) : f·z ∈ span(target_gens)}.

    Args:
        f: Map from the domain module to the target module
        domain_gens: Columns spanning a submodule of the domain
        target_gens: Columns spanning a submodule of the target

    Returns:
        IntMatrix whose columns are a basis of the preimage, in domain coordinates
    """
    if domain_gens.rows != f.cols or target_gens.rows != f.rows:
        raise InvalidInputError("Generator shapes do not match the map")
    stacked = IntMatrix.hstack([f @ domain_gens, -target_gens], rows=f.rows)
    coefficients = kernel_basis(stacked).select_rows(range(domain_gens.cols))
    return image_basis(domain_gens @ coefficients)


@dataclass(frozen=True)
class PresentedGroup:
    """
    Subquotient of a free module: span(generators) modulo the relations.

    generators are linearly independent columns in ℤ^ambient_rank; relations
    are columns of coordinates with respect to those generators.
    """

    ambient_rank: int
    generators: IntMatrix
    relations: IntMatrix

    def __post_init__(self):
        if self.generators.rows != self.ambient_rank:
            raise InvalidInputError("Generators do not live in the ambient module")
        if self.relations.rows != self.generators.cols:
            raise InvalidInputError("Relations are not expressed in generator coordinates")

    @cached_property
    def _generator_decomposition(self) -> SmithDecomposition:
        snf = smith_normal_form(self.generators)
        if snf.rank != self.generators.cols:
            raise ConstructionError("Witness generators are linearly dependent")
        return snf

    @cached_property
    def _relation_decomposition(self) -> SmithDecomposition:
        return smith_normal_form(self.relations)

    @cached_property
    def _kept(self) -> tuple[tuple[int, int], ...]:
        snf = self._relation_decomposition
        kept = []
        for index in range(self.generators.cols):
            order = snf.invariant_factors[index] if index < snf.rank else 0
            if order != 1:
                kept.append((index, order))
        return tuple(kept)

    @property
    def orders(self) -> tuple[int, ...]:
        """Orders of the canonical generators; 0 marks an infinite cyclic summand."""
        return tuple(order for _, order in self._kept)

    @cached_property
    def group(self) -> FgAbelianGroup:
        return FgAbelianGroup(
            free_rank=sum(1 for o in self.orders if o == 0),
            torsion=tuple(o for o in self.orders if o > 0),
        )

    def normal_form(self) -> FgAbelianGroup:
        return self.group

    @cached_property
    def canonical_generators(self) -> IntMatrix:
        """Ambient representatives of the canonical cyclic summands, in order."""
        change = self._relation_decomposition.L_inv.select_columns(index for index, _ in self._kept)
        return self.generators @ change

    def contains(self, vector: Sequence[int]) -> bool:
        return solve(self.generators, vector, self._generator_decomposition) is not None

    def coordinates(self, vector: Sequence[int]) -> Vector:
        """Canonical coordinates of the class of an ambient vector, torsion entries reduced."""
        x = solve(self.generators, vector, self._generator_decomposition)
        if x is None:
            raise ConstructionError("Vector does not lie in the span of the witness generators")
        y = self._relation_decomposition.L.apply(x)
        return tuple(y[index] % order if order else y[index] for index, order in self._kept)


def subquotient(numerator: IntMatrix, denominator: IntMatrix) -> PresentedGroup:
    """span(numerator) / span(denominator); the denominator must lie inside the numerator."""
    if numerator.rows != denominator.rows:
        raise InvalidInputError("Numerator and denominator live in different modules")
    basis = image_basis(numerator)
    basis_snf = smith_normal_form(basis)
    coordinates = []
    for column in denominator.columns():
        x = solve(basis, column, basis_snf)
        if x is None:
            raise ConstructionError("Denominator is not contained in the numerator")
        coordinates.append(x)
    relations = IntMatrix.from_columns(coordinates, rows=basis.cols)
    return PresentedGroup(ambient_rank=numerator.rows, generators=basis, relations=relations)


def homology(f: IntMatrix, g: IntMatrix) -> PresentedGroup:
    """
    ker(g)/im(f) for a complex A →f B →g C, with witnesses in B.

    Raises:
        InvalidInputError: if the shapes do not compose or g·f ≠ 0
    """
    if g.cols != f.rows:
        raise InvalidInputError(f"Maps do not compose: f is {f.rows}x{f.cols}, g is {g.rows}x{g.cols}")
    if not (g @ f).is_zero():
        raise InvalidInputError("g·f is nonzero, so (f, g) is not a complex")
    return subquotient(kernel_basis(g), f)


def localize_at_prime(group: FgAbelianGroup, p: int) -> FgAbelianGroup:
    """Free rank plus the p-primary torsion."""
    require_prime(p)
    parts = tuple(q for q in (p_part(t, p) for t in group.torsion) if q > 1)
    return FgAbelianGroup(free_rank=group.free_rank, torsion=parts)


def _reduce_rows(matrix: IntMatrix, orders: Sequence[int]) -> IntMatrix:
    return IntMatrix(matrix.rows, matrix.cols, tuple(
        tuple(x % order if order else x for x in row) for row, order in zip(matrix.entries, orders)
    ))


def _relation_columns(orders: Sequence[int]) -> IntMatrix:
    columns = []
    for index, order in enumerate(orders):
        if order:
            columns.append(tuple(order if k == index else 0 for k in range(len(orders))))
    return IntMatrix.from_columns(columns, rows=len(orders))


@dataclass(frozen=True)
class GroupHomomorphism:
    """
    Map between groups given by canonical generator orders (0 = ℤ).

    Column j of matrix holds the target coordinates of the j-th source generator.
    """

    source_orders: tuple[int, ...]
    target_orders: tuple[int, ...]
    matrix: IntMatrix

    def __post_init__(self):
        if (self.matrix.rows, self.matrix.cols) != (len(self.target_orders), len(self.source_orders)):
            raise InvalidInputError("Homomorphism matrix does not match the generator counts")
        object.__setattr__(self, "matrix", _reduce_rows(self.matrix, self.target_orders))

    @property
    def source(self) -> FgAbelianGroup:
        return FgAbelianGroup.from_cyclic_orders(self.source_orders)

    @property
    def target(self) -> FgAbelianGroup:
        return FgAbelianGroup.from_cyclic_orders(self.target_orders)

    def _image_with_relations(self) -> IntMatrix:
        return IntMatrix.hstack([self.matrix, _relation_columns(self.target_orders)], rows=len(self.target_orders))

    def kernel(self) -> FgAbelianGroup:
        k = len(self.source_orders)
        solutions = kernel_basis(self._image_with_relations()).select_rows(range(k))
        return subquotient(solutions, _relation_columns(self.source_orders)).group

    def cokernel(self) -> FgAbelianGroup:
        return cokernel(self._image_with_relations())

    def is_isomorphism(self) -> bool:
        return self.kernel().is_trivial and self.cokernel().is_trivial

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def compose(self, after: "GroupHomomorphism") -> "GroupHomomorphism":
        """after ∘ self."""
        if after.source_orders != self.target_orders:
            raise InvalidInputError("Homomorphisms do not compose")
        return GroupHomomorphism(self.source_orders, after.target_orders, after.matrix @ self.matrix)

    def is_scalar(self, d: int) -> bool:
        """True when the map is multiplication by d on a group mapping to itself."""
        if self.source_orders != self.target_orders:
            return False
        difference = self.matrix - IntMatrix.identity(len(self.source_orders)).scaled(d)
        return _reduce_rows(difference, self.target_orders).is_zero()

    def to_dict(self) -> dict:
        return {
            "source": self.source.to_dict(),
            "target": self.target.to_dict(),
            "matrix": self.matrix.tolist(),
        }


def induced_map(source: PresentedGroup, target: PresentedGroup, chain_map: IntMatrix) -> GroupHomomorphism:
    """
    Homomorphism induced by an ambient map on two subquotients.

    Args:
        source: Subquotient of the domain of chain_map
        target: Subquotient of the codomain of chain_map
        chain_map: Ambient map carrying source numerator into target numerator

    Returns:
        GroupHomomorphism on canonical generators
    """
    if (chain_map.rows, chain_map.cols) != (target.ambient_rank, source.ambient_rank):
        raise InvalidInputError("Chain map does not connect the two ambient modules")
    images = chain_map @ source.canonical_generators
    columns = [target.coordinates(column) for column in images.columns()]
    matrix = IntMatrix.from_columns(columns, rows=len(target.orders))
    return GroupHomomorphism(source.orders, target.orders, matrix)
