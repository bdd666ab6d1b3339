"""Hirzebruch-Jung string arithmetic.

For a string with self-intersections ``-e_1, ..., -e_r`` the sequences
``mu`` and ``lam`` solve the three-term recurrence
``x_{i-1} - e_i x_i + x_{i+1} = 0`` from opposite ends, normalised by
``mu_0 = 0, mu_1 = 1`` and ``lam_{r+1} = 0, lam_r = 1``.  Their common
endpoint ``n = lam_0 = mu_{r+1}`` is the determinant of the negated Gram
matrix.

Coefficient vectors here are positional (index k-1 holds the coefficient
of the k-th curve); binding to curve ids happens in :mod:`chains`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class InvalidChainError(ValueError):
    pass


@dataclass(frozen=True)
class HJData:
    e: tuple[int, ...]
    n: int
    lam: tuple[int, ...]
    mu: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.e)

    def gram(self) -> list[list[int]]:
        r = self.r
        g = [[0] * r for _ in range(r)]
        for i in range(r):
            g[i][i] = -self.e[i]
            if i + 1 < r:
                g[i][i + 1] = g[i + 1][i] = 1
        return g


def hj_sequences(e: Sequence[int]) -> HJData:
    e = tuple(int(x) for x in e)
    if not e:
        raise InvalidChainError("empty chain")
    if any(x < 2 for x in e):
        raise InvalidChainError(f"chain entries must be >= 2, got {list(e)}")
    r = len(e)
    mu = [0, 1]
    for i in range(1, r + 1):
        mu.append(e[i - 1] * mu[i] - mu[i - 1])
    lam = [0] * (r + 2)
    lam[r] = 1
    for i in range(r, 0, -1):
        lam[i - 1] = e[i - 1] * lam[i] - lam[i + 1]
    return HJData(e=e, n=mu[r + 1], lam=tuple(lam), mu=tuple(mu))


def _check_index(hj: HJData, i: int) -> None:
    if not 1 <= i <= hj.r:
        raise IndexError(f"index {i} outside 1..{hj.r}")


def m_i_divisor(hj: HJData, i: int) -> list[Fraction]:
    """The divisor M_i supported on the string with M_i.G_j = -delta_ij."""
    _check_index(hj, i)
    n, lam, mu = hj.n, hj.lam, hj.mu
    return [
        Fraction(lam[i] * mu[k], n) if k <= i else Fraction(mu[i] * lam[k], n)
        for k in range(1, hj.r + 1)
    ]


def e_divisor(hj: HJData, a: Sequence[Fraction | int]) -> list[Fraction]:
    """The divisor E(A) on the string with E(A).G_k = -a_k."""
    r = hj.r
    if len(a) != r:
        raise ValueError(f"expected {r} intersection numbers, got {len(a)}")
    a = [Fraction(x) for x in a]
    n, lam, mu = hj.n, hj.lam, hj.mu
    # prefix sums of mu_k a_k and suffix sums of lam_k a_k
    left = [Fraction(0)] * (r + 2)
    for k in range(1, r + 1):
        left[k] = left[k - 1] + mu[k] * a[k - 1]
    right = [Fraction(0)] * (r + 2)
    for k in range(r, 0, -1):
        right[k] = right[k + 1] + lam[k] * a[k - 1]
    return [(lam[i] * left[i] + mu[i] * right[i + 1]) / n for i in range(1, r + 1)]


def f_chain_a_vector(d: Sequence[Fraction | int]) -> list[Fraction]:
    # A = -(K_F + D) on an F-chain: K_F.G_1 = -1 and K_F.G_k = 0 otherwise
    d = [Fraction(x) for x in d]
    return [1 - d[0]] + [-x for x in d[1:]]


def m_d_divisor(hj: HJData, d: Sequence[Fraction | int]) -> list[Fraction]:
    """M(D) on an F-chain given the numbers D.G_k."""
    if len(d) != hj.r:
        raise ValueError(f"expected {hj.r} intersection numbers, got {len(d)}")
    return e_divisor(hj, f_chain_a_vector(d))


def gamma_r_closed_form(hj: HJData, d: Sequence[Fraction | int]) -> Fraction:
    return (1 - sum((hj.mu[k] * Fraction(d[k - 1]) for k in range(1, hj.r + 1)), Fraction(0))) / hj.n


def df_certificate(hj: HJData, d: Sequence[Fraction | int]) -> Fraction:
    """sum mu_k D.G_k; the string is a (D,F)-chain iff this is < 1."""
    return sum((hj.mu[k] * Fraction(d[k - 1]) for k in range(1, hj.r + 1)), Fraction(0))


def gram_pairing(hj: HJData, coeffs: Sequence[Fraction | int]) -> list[Fraction]:
    """Intersections of sum c_k G_k with each G_j."""
    r = hj.r
    out = []
    for j in range(r):
        v = -hj.e[j] * Fraction(coeffs[j])
        if j > 0:
            v += Fraction(coeffs[j - 1])
        if j + 1 < r:
            v += Fraction(coeffs[j + 1])
        out.append(v)
    return out
