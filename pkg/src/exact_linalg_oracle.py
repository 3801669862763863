"""
Ground-truth exact linear algebra, independent of any lattice structure.

Determinants by fraction-free Bareiss elimination (with plain Gaussian
elimination and cofactor expansion kept as independent cross-checks),
inverses by Gauss-Jordan elimination over the rationals.
"""

import logging
from fractions import Fraction
from typing import List

from src.errors import ConsistencyError, DimensionError, NotSquareError, SingularMatrixError
from src.rat_matrix import RatMatrix

logger = logging.getLogger(__name__)


def _require_square(m: RatMatrix) -> int:
    if not m.is_square():
        raise NotSquareError(f"expected a square matrix, got {m.rows}x{m.cols}")
    return m.rows


def bareiss_det(m: RatMatrix) -> Fraction:
    """Fraction-free elimination; the pivot is the first nonzero entry down the column."""
    n = _require_square(m)
    if n == 0:
        return Fraction(1)
    a = m.to_lists()
    sign = 1
    previous = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / previous
        previous = a[k][k]
    return sign * a[n - 1][n - 1]


def gaussian_det(m: RatMatrix) -> Fraction:
    """Naive elimination over Fractions."""
    n = _require_square(m)
    a = m.to_lists()
    det = Fraction(1)
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            factor = a[i][k] / a[k][k]
            if factor:
                for j in range(k, n):
                    a[i][j] -= factor * a[k][j]
    return det


def cofactor_det(m: RatMatrix) -> Fraction:
    """Laplace expansion along the first row; only meant for small matrices."""
    n = _require_square(m)
    return _laplace(m.to_lists()) if n else Fraction(1)


def _laplace(a: List[List[Fraction]]) -> Fraction:
    if len(a) == 1:
        return a[0][0]
    total = Fraction(0)
    for j, value in enumerate(a[0]):
        if value:
            minor = [row[:j] + row[j + 1:] for row in a[1:]]
            total += (-1) ** j * value * _laplace(minor)
    return total


def oracle_det(m: RatMatrix) -> Fraction:
    return bareiss_det(m)


def matmul(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    columns = list(zip(*b.entries)) if b.rows else [() for _ in range(b.cols)]
    rows = ([sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in columns] for row in a.entries)
    return RatMatrix.from_rows(rows, cols=b.cols)


def identity_check(m: RatMatrix) -> bool:
    return m == RatMatrix.identity(m.rows) if m.is_square() else False


def oracle_inverse(m: RatMatrix) -> RatMatrix:
    """Gauss-Jordan inverse; the result is checked against M M^-1 = I."""
    n = _require_square(m)
    a = m.to_lists()
    inv = RatMatrix.identity(n).to_lists()
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        a[k], a[pivot] = a[pivot], a[k]
        inv[k], inv[pivot] = inv[pivot], inv[k]
        scale = a[k][k]
        a[k] = [v / scale for v in a[k]]
        inv[k] = [v / scale for v in inv[k]]
        for i in range(n):
            factor = a[i][k]
            if i != k and factor:
                a[i] = [x - factor * y for x, y in zip(a[i], a[k])]
                inv[i] = [x - factor * y for x, y in zip(inv[i], inv[k])]
    result = RatMatrix.from_rows(inv, cols=n)
    if not identity_check(matmul(m, result)):
        raise ConsistencyError("Gauss-Jordan inverse failed its identity check")
    return result
