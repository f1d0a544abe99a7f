"""Splitting type of the rank-2 bundle on P^1 with transition matrix ``[[1, f], [0, z^m]]``.

Here ``f(z) = a_1 z + ... + a_{m-1} z^{m-1}``.  By Grothendieck the bundle
is ``O(k) + O(m-k)`` with ``m/2 <= k <= m``.  The classifier reads ``k`` off
the ranks of Hankel matrices built from the ``a_i``; the oracle counts global
sections of ``E(-r)`` by solving the gluing equations directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .exactalg import as_fraction

__all__ = [
    "SplittingType",
    "TransitionData",
    "exact_det",
    "exact_rank",
    "hankel_determinant",
    "hankel_matrix",
    "hom_dimension_oracle",
    "splitting_type",
]


@dataclass(frozen=True)
class TransitionData:
    m: int
    coeffs: tuple  # a_1 .. a_{m-1}

    def __init__(self, m: int, coeffs: Sequence):
        if not isinstance(m, int) or m < 2:
            raise ValueError("m must be an integer >= 2")
        coeffs = tuple(as_fraction(c) for c in coeffs)
        if len(coeffs) != m - 1:
            raise ValueError(
                f"need exactly m-1 = {m - 1} coefficients a_1..a_{m - 1}; "
                "a_0 and a_m are removed by normalising f first"
            )
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coeffs", coeffs)

    def a(self, i: int) -> Fraction:
        """``a_i`` with the convention ``a_i = 0`` outside ``1..m-1``."""
        return self.coeffs[i - 1] if 1 <= i <= self.m - 1 else Fraction(0)


@dataclass(frozen=True)
class SplittingType:
    m: int
    k: int

    def __post_init__(self):
        if not (self.m - self.k <= self.k <= self.m):
            raise ValueError("need m/2 <= k <= m")

    @property
    def degrees(self) -> tuple[int, int]:
        return (self.k, self.m - self.k)

    def __str__(self):
        return f"O({self.k})+O({self.m - self.k})"

    def hom_dimension(self, r: int) -> int:
        """``dim Hom(O(r), O(k) + O(m-k))``."""
        return max(0, self.k - r + 1) + max(0, self.m - self.k - r + 1)


def exact_rank(rows: Sequence[Sequence]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    mat = [[as_fraction(x) for x in row] for row in rows]
    if not mat or not mat[0]:
        return 0
    # clear denominators row by row so that Bareiss stays in the integers
    ints = []
    for row in mat:
        den = lcm(*(x.denominator for x in row))
        ints.append([int(x * den) for x in row])
    nrows, ncols = len(ints), len(ints[0])
    rank, prev = 0, 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if ints[r][col]), None)
        if pivot is None:
            continue
        ints[rank], ints[pivot] = ints[pivot], ints[rank]
        piv = ints[rank][col]
        for r in range(rank + 1, nrows):
            for c in range(col + 1, ncols):
                ints[r][c] = (piv * ints[r][c] - ints[r][col] * ints[rank][c]) // prev
            ints[r][col] = 0
        prev = piv
        rank += 1
        if rank == nrows:
            break
    return rank


def exact_det(rows: Sequence[Sequence]) -> Fraction:
    mat = [[as_fraction(x) for x in row] for row in rows]
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise ValueError("determinant of a non-square matrix")
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if mat[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        for r in range(col + 1, n):
            f = mat[r][col] * inv
            if f:
                for c in range(col, n):
                    mat[r][c] -= f * mat[col][c]
    return det


def hankel_matrix(data: TransitionData, n: int) -> list[list[Fraction]]:
    """The ``n x (m-n)`` matrix with entries ``a_{i+j-1}`` (1-based ``i, j``)."""
    return [[data.a(i + j - 1) for j in range(1, data.m - n + 1)] for i in range(1, n + 1)]


def splitting_type(data: TransitionData) -> SplittingType:
    m = data.m
    for n in range((m + 1) // 2, m + 1):
        if n == m or exact_rank(hankel_matrix(data, n)) == m - n:
            return SplittingType(m, n)
    raise AssertionError("unreachable: n = m always qualifies")


def hankel_determinant(coeffs: Sequence) -> Fraction:
    """``det [a_{i+j-1}]`` for ``a_1 .. a_{2n-1}``."""
    coeffs = [as_fraction(c) for c in coeffs]
    if len(coeffs) % 2 == 0:
        raise ValueError("need an odd number 2n-1 of coefficients")
    n = (len(coeffs) + 1) // 2
    return exact_det([[coeffs[i + j] for j in range(n)] for i in range(n)])


def hom_dimension_oracle(r: int, data: TransitionData) -> int:
    """``dim H^0(E(-r))`` by solving the gluing equations.

    A section is a pair of polynomials ``x(w), y(w)`` on the chart at
    infinity (``w = 1/z``) such that ``z^(m-r) y(1/z)`` and
    ``z^(-r) (x(1/z) + f(z) y(1/z))`` are polynomial in ``z``.  The first
    condition bounds ``deg y <= m - r``; the second says every monomial
    ``z^e`` with ``e < r`` cancels.
    """
    m = data.m
    dy = m - r
    if dy < 0:
        # y = 0, so x(1/z) must avoid z^e for e < r; impossible for r > 0
        return max(0, -r + 1)
    dx = max(-r, m - r - 1, 0)
    nx, ny = dx + 1, dy + 1
    # column j < nx: x coefficient of w^j; column nx + l: y coefficient of w^l
    rows: dict[int, list[Fraction]] = {}

    def row(e):
        return rows.setdefault(e, [Fraction(0)] * (nx + ny))

    for j in range(nx):
        if -j < r:
            row(-j)[j] += 1
    for l in range(ny):
        for i in range(1, m):
            a = data.a(i)
            if a and i - l < r:
                row(i - l)[nx + l] += a
    return nx + ny - exact_rank(list(rows.values()))
