"""Exact linear algebra over the rationals.

Only the handful of operations the engine needs: fraction-free
determinants (Bareiss), the leading-principal-minor test for negative
definiteness, and Gaussian elimination for square systems.  Matrices are
plain lists of rows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence[Fraction | int]]


class SingularMatrixError(ArithmeticError):
    pass


def bareiss_minors(m: Matrix) -> list[Fraction]:
    """Leading principal minors det(m[:k, :k]) for k = 1..n.

    Fraction-free elimination without pivoting: after step k the entry
    a[k][k] equals the k-th leading minor.  If a leading minor vanishes the
    remaining minors are computed by direct expansion of the submatrix.
    """
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    minors: list[Fraction] = []
    prev = Fraction(1)
    for k in range(n):
        minors.append(a[k][k])
        if a[k][k] == 0:
            minors.extend(determinant([row[: j + 1] for row in m[: j + 1]]) for j in range(k + 1, n))
            return minors
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return minors


def determinant(m: Matrix) -> Fraction:
    n = len(m)
    if n == 0:
        return Fraction(1)
    a = [[Fraction(x) for x in row] for row in m]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_negative_definite(m: Matrix) -> bool:
    """Sylvester's criterion: (-1)^k * D_k > 0 for every leading minor D_k."""
    if len(m) == 0:
        return True
    return all((d < 0) if k % 2 == 0 else (d > 0) for k, d in enumerate(bareiss_minors(m)))


def solve(m: Matrix, b: Sequence[Fraction | int]) -> list[Fraction]:
    """Solve m x = b exactly by Gaussian elimination with partial pivoting on nonzeros."""
    n = len(m)
    if len(b) != n or any(len(row) != n for row in m):
        raise ValueError("solve expects a square system")
    a = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(m, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise SingularMatrixError(f"singular system at column {col}")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        for r in range(col + 1, n):
            f = a[r][col]
            if f:
                f /= p
                row_r, row_c = a[r], a[col]
                for c in range(col, n + 1):
                    row_r[c] -= f * row_c[c]
    x = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        s = a[r][n] - sum((a[r][c] * x[c] for c in range(r + 1, n)), Fraction(0))
        x[r] = s / a[r][r]
    return x


def matvec(m: Matrix, v: Sequence[Fraction | int]) -> list[Fraction]:
    return [sum((Fraction(x) * y for x, y in zip(row, v)), Fraction(0)) for row in m]
