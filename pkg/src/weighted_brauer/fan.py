"""
Toric fan of a weighted projective space.

A unimodular completion U has ρ as its first row; dropping the leftmost column
of U⁻¹ leaves the ray matrix Y whose rows are the rays v₀, …, v_n. The maximal
cones are spanned by every n of the rays.
"""
import logging
import random
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Optional

import numpy as np
from sympy import Matrix, factorint

from weighted_brauer.errors import ConstructionError, InvalidInputError
from weighted_brauer.intlin import IntMatrix, cokernel, smith_normal_form, solve
from weighted_brauer.weights import WeightVector, divide_weight

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Fan:
    weights: WeightVector
    U: IntMatrix
    U_inv: IntMatrix
    Y: IntMatrix

    @property
    def n(self) -> int:
        return self.weights.n

    @property
    def rays(self) -> tuple[tuple[int, ...], ...]:
        return self.Y.entries

    @property
    def maximal_cones(self) -> tuple[tuple[int, ...], ...]:
        """Index subsets of size n, in lexicographic order."""
        return tuple(combinations(range(self.n + 1), self.n))

    def cone_matrix(self, cone: tuple[int, ...]) -> IntMatrix:
        return self.Y.select_rows(cone)

    @cached_property
    def multiplicities(self) -> tuple[int, ...]:
        """m_j = |det| of the rays other than v_j."""
        return tuple(
            self.cone_matrix(tuple(i for i in range(self.n + 1) if i != j)).abs_det()
            for j in range(self.n + 1)
        )

    def to_dict(self) -> dict:
        return {
            "weights": list(self.weights.rho),
            "U": self.U.tolist(),
            "rays": [list(v) for v in self.rays],
            "multiplicities": list(self.multiplicities),
        }


def _euclidean_completion(rho: tuple[int, ...]) -> tuple[IntMatrix, IntMatrix]:
    """Column-reduce ρ to (1, 0, …, 0), tracking the operations and their inverses."""
    size = len(rho)
    r = list(rho)
    C = np.zeros((size, size), dtype=object)
    C_inv = np.zeros((size, size), dtype=object)
    for i in range(size):
        C[i, i] = 1
        C_inv[i, i] = 1

    # invariant: ρ·C = r and C·C_inv = I
    while True:
        nonzero = [i for i, x in enumerate(r) if x]
        if len(nonzero) == 1:
            break
        k = min(nonzero, key=lambda i: (abs(r[i]), i))
        for j in nonzero:
            if j == k:
                continue
            q = r[j] // r[k]
            r[j] -= q * r[k]
            C[:, j] = C[:, j] - q * C[:, k]
            C_inv[k] = C_inv[k] + q * C_inv[j]

    k = nonzero[0]
    if r[k] < 0:
        r[k] = -r[k]
        C[:, k] = -C[:, k]
        C_inv[k] = -C_inv[k]
    if r[k] != 1:
        raise InvalidInputError(f"Weights {rho} have gcd {r[k]}; gcd 1 is required")
    if k != 0:
        r[0], r[k] = r[k], r[0]
        C[:, [0, k]] = C[:, [k, 0]]
        C_inv[[0, k]] = C_inv[[k, 0]]

    return IntMatrix.from_array(C_inv), IntMatrix.from_array(C)


def _unimodular_inverse(matrix: IntMatrix) -> IntMatrix:
    snf = smith_normal_form(matrix)
    if matrix.rows != matrix.cols or snf.rank != matrix.rows or any(d != 1 for d in snf.invariant_factors):
        raise InvalidInputError("Completion matrix is not unimodular")
    return snf.R @ snf.L


def unimodular_completion(w: WeightVector) -> IntMatrix:
    """
    Square unimodular matrix with first row ρ.

    For ρ₀ = 1 the result is ρ stacked on the identity rows.

    Raises:
        InvalidInputError: if gcd(ρ) != 1
    """
    if w.gcd != 1:
        raise InvalidInputError(f"Weights {w} have gcd {w.gcd}; gcd 1 is required")
    U, _ = _euclidean_completion(w.rho)
    return U


def _check_fan(fan: Fan) -> None:
    size = fan.n + 1
    if fan.U.row(0) != fan.weights.rho:
        raise ConstructionError(f"First row of U is {fan.U.row(0)}, expected {fan.weights.rho}")
    if fan.U @ fan.U_inv != IntMatrix.identity(size):
        raise ConstructionError("U_inv is not the inverse of U")
    weighted_sum = IntMatrix.from_rows([fan.weights.rho]) @ fan.Y
    if not weighted_sum.is_zero():
        raise ConstructionError(f"Weighted ray sum is {weighted_sum.row(0)}, expected 0")
    if not cokernel(fan.Y.transpose()).is_trivial:
        raise ConstructionError("Rays do not span the lattice")
    if any(m == 0 for m in fan.multiplicities):
        raise ConstructionError("Some n rays are linearly dependent")


def build_fan(w: WeightVector, completion: Optional[IntMatrix] = None) -> Fan:
    """
    Fan of ℙ(w) from the deterministic completion, or from an explicit one.

    Args:
        w: Weights with gcd 1
        completion: Optional unimodular matrix whose first row is ρ

    Returns:
        Fan satisfying Σ ρ_i v_i = 0 with rays spanning ℤⁿ
    """
    if w.gcd != 1:
        raise InvalidInputError(f"Weights {w} have gcd {w.gcd}; gcd 1 is required")
    size = w.n + 1
    if completion is None:
        U, U_inv = _euclidean_completion(w.rho)
    else:
        if (completion.rows, completion.cols) != (size, size):
            raise InvalidInputError(f"Completion must be {size}x{size}")
        if completion.row(0) != w.rho:
            raise InvalidInputError(f"Completion first row {completion.row(0)} differs from {w.rho}")
        U, U_inv = completion, _unimodular_inverse(completion)

    fan = Fan(weights=w, U=U, U_inv=U_inv, Y=U_inv.select_columns(range(1, size)))
    _check_fan(fan)
    logger.debug(f"Built fan of {w} with rays {fan.rays}")
    return fan


def multiplicities(fan: Fan) -> tuple[int, ...]:
    return fan.multiplicities


def is_smooth(fan: Fan) -> bool:
    return all(m == 1 for m in fan.multiplicities)


def singular_cones(fan: Fan) -> list[tuple[int, ...]]:
    """Maximal cones of multiplicity > 1, each given by its ray indices."""
    size = fan.n + 1
    return [
        tuple(i for i in range(size) if i != j)
        for j, m in enumerate(fan.multiplicities)
        if m > 1
    ]


def random_completion(w: WeightVector, rng: random.Random) -> IntMatrix:
    """
    Another completion of ρ: random unimodular row operations below the first row.

    The result always differs from unimodular_completion(w).
    """
    base = unimodular_completion(w)
    size = w.n + 1
    rows = [list(row) for row in base.entries]

    for _ in range(2 * size):
        target = rng.randrange(1, size)
        choice = rng.random()
        if choice < 0.4:
            source = rng.randrange(0, size)
            if source != target:
                c = rng.choice([-2, -1, 1, 2])
                rows[target] = [a + c * b for a, b in zip(rows[target], rows[source])]
        elif choice < 0.7 and size > 2:
            other = rng.randrange(1, size)
            rows[target], rows[other] = rows[other], rows[target]
        else:
            rows[target] = [-a for a in rows[target]]

    candidate = IntMatrix.from_rows(rows)
    if candidate == base:
        rows[1] = [a + b for a, b in zip(rows[1], rows[0])]
        candidate = IntMatrix.from_rows(rows)
    return candidate


def completion_change(fan_a: Fan, fan_b: Fan) -> IntMatrix:
    """W with Y_b = Y_a·W; raises ConstructionError unless W exists and is unimodular."""
    if fan_a.weights != fan_b.weights:
        raise InvalidInputError("Fans have different weights")
    snf = smith_normal_form(fan_a.Y)
    columns = []
    for column in fan_b.Y.columns():
        x = solve(fan_a.Y, column, snf)
        if x is None:
            raise ConstructionError("Ray matrices do not differ by a change of basis")
        columns.append(x)
    W = IntMatrix.from_columns(columns, rows=fan_a.n)
    if W.abs_det() != 1:
        raise ConstructionError(f"Change of basis has determinant ±{W.abs_det()}")
    return W


@dataclass(frozen=True)
class WeightDivisionTransform:
    """
    Lattice comparison between ρ and ρ′ = ρ with weight `index` divided by d.

    V = U′·(U°)⁻¹ has first row (1, 0, …, 0), and its lower-right block V″
    satisfies Y′·V″ = Y°. V″ is integral with det ±d, so it becomes
    invertible once d is inverted.
    """

    weights: WeightVector
    reduced: WeightVector
    index: int
    d: int
    V: Matrix
    Y_circ: Matrix
    Y_prime: Matrix

    @property
    def V_prime(self) -> Matrix:
        return self.V[1:, :1]

    @property
    def V_double_prime(self) -> Matrix:
        return self.V[1:, 1:]

    @property
    def determinant(self):
        return self.V_double_prime.det()

    def inverted_primes(self) -> set[int]:
        """Primes in the denominators of V″ and of its inverse."""
        primes = set()
        for value in list(self.V_double_prime) + list(self.V_double_prime.inv()):
            denominator = abs(int(value.q))
            if denominator > 1:
                primes.update(factorint(denominator))
        return primes

    def to_dict(self) -> dict:
        def rational_rows(matrix: Matrix) -> list[list[str]]:
            return [[str(matrix[i, j]) for j in range(matrix.cols)] for i in range(matrix.rows)]

        return {
            "weights": list(self.weights.rho),
            "reduced": list(self.reduced.rho),
            "index": self.index,
            "d": self.d,
            "V": rational_rows(self.V),
            "determinant": str(self.determinant),
        }


def weight_division_transform(w: WeightVector, index: int, d: int) -> WeightDivisionTransform:
    """
    Exact rational comparison of the fans of ρ and of ρ with one weight divided by d.

    Raises:
        InvalidInputError: if gcd(ρ) != 1 or d does not divide ρ_index
        ConstructionError: if the block structure of V fails
    """
    reduced = divide_weight(w, index, d)
    U = Matrix(unimodular_completion(w).tolist())
    U_circ = U.copy()
    U_circ[:, index] = U_circ[:, index] / d
    U_prime = Matrix(unimodular_completion(reduced).tolist())

    V = U_prime * U_circ.inv()
    size = w.n + 1
    if list(V[0, :]) != [1] + [0] * (size - 1):
        raise ConstructionError(f"First row of V is {list(V[0, :])}")

    Y_circ = U_circ.inv()[:, 1:]
    Y_prime = U_prime.inv()[:, 1:]
    transform = WeightDivisionTransform(
        weights=w, reduced=reduced, index=index, d=d, V=V, Y_circ=Y_circ, Y_prime=Y_prime
    )
    if Y_prime * transform.V_double_prime != Y_circ:
        raise ConstructionError("Y'·V'' differs from Y°")
    return transform
