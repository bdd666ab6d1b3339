"""Effective bounds for multiples of the adjoint divisor.

With A = i P for the integrality index i, every quantity here is an exact
rational function of A^2, K_X.A and K_X^2; the only rounding is the
explicit floors in alpha, the Jihao variant and n-frak.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .rational import denominator_lcm
from .surface import CurveConfiguration
from .zariski import MissingDataError, ZariskiResult, ambient_numbers


class NotBigError(ValueError):
    pass


def _big(a_self: Fraction) -> Fraction:
    a_self = Fraction(a_self)
    if a_self <= 0:
        raise NotBigError(f"A^2 = {a_self} is not positive")
    return a_self


def integrality_index(z: ZariskiResult) -> int:
    """Least m > 0 with m P integral, taking K_F and K_X as integral classes."""
    values = [v for _, v in z.negative.items()] + [z.params.epsilon] + list(z.params.delta.values())
    return denominator_lcm(values)


def alpha_bound(a_self, a_kx) -> int:
    a_self = _big(a_self)
    a_kx = Fraction(a_kx)
    return floor((a_kx + 2) ** 2 / (4 * a_self) + (9 * a_self + 6 * a_kx) / 4)


def m_frak(a_self, a_kx, kx_self, t_a=0, t_self=0, t_kx=0) -> Fraction:
    """((K_X - T).A + 2)^2 / 4A^2 - (K_X - T)^2 / 4.

    T enters through T.A, T^2 and K_X.T; all default to zero (T = 0).
    """
    a_self = _big(a_self)
    ka = Fraction(a_kx) - Fraction(t_a)
    kk = Fraction(kx_self) - 2 * Fraction(t_kx) + Fraction(t_self)
    return (ka + 2) ** 2 / (4 * a_self) - kk / 4


def thresholds(i: int, alpha: int) -> tuple[int, int]:
    """(vanishing, birational) thresholds i(alpha+1) and i(alpha+3)."""
    return i * (alpha + 1), i * (alpha + 3)


def jihao_threshold(i: int, m: Fraction) -> int:
    return i * (floor(m) + 1)


def rr_dimension(m: int, vol, kx_p, chi: int) -> Fraction:
    return Fraction(m * m, 2) * Fraction(vol) - Fraction(m, 2) * Fraction(kx_p) + chi


def n_frak(eps, i: int, a_self) -> int:
    eps = Fraction(eps)
    if eps == 0:
        raise ValueError("n-frak needs a positive epsilon")
    a_self = _big(a_self)
    ei = eps * i
    return i * floor((3 * ei + 1) ** 2 / (4 * ei * ei) * a_self + 1 / a_self + 1 / ei)


@dataclass(frozen=True)
class HodgeVerdict:
    holds: bool
    equality: bool
    witness: bool


def hodge_check(d1_self, d2_self, d12, mix_positive: bool = True) -> HodgeVerdict:
    """D1^2 D2^2 <= (D1 D2)^2, given some combination of positive square."""
    lhs = Fraction(d1_self) * Fraction(d2_self)
    rhs = Fraction(d12) ** 2
    return HodgeVerdict(lhs <= rhs, lhs == rhs, mix_positive)


def beta_ha(d1_self, d12) -> Fraction:
    d1_self = Fraction(d1_self)
    if d1_self <= 0:
        raise ValueError("D1^2 must be positive")
    return 2 * Fraction(d12) / d1_self + 1


@dataclass(frozen=True)
class BoundsReport:
    i_index: int
    p_self: Fraction
    kx_p: Fraction
    a_self: Fraction
    a_kx: Fraction
    alpha: int
    m_frak: Fraction
    vanishing_threshold: int
    birational_threshold: int
    jihao_threshold: int
    n_frak: int | None
    n_frak_dominates: bool | None
    rr_coeffs: tuple[Fraction, Fraction, int]
    side_condition: bool
    alpha_exceeds: bool


def bounds_report(config: CurveConfiguration, z: ZariskiResult) -> BoundsReport:
    amb = ambient_numbers(config, z)
    if amb.p_self <= 0:
        raise NotBigError(f"P^2 = {amb.p_self} is not positive")
    i = integrality_index(z)
    a_self = i * i * amb.p_self
    a_kx = i * amb.kx_p
    kx_self = config.globals.kx_self
    alpha = alpha_bound(a_self, a_kx)
    mf = m_frak(a_self, a_kx, kx_self)
    van, bir = thresholds(i, alpha)
    eps = z.params.epsilon
    nf = n_frak(eps, i, a_self) if eps > 0 else None
    return BoundsReport(
        i_index=i,
        p_self=amb.p_self,
        kx_p=amb.kx_p,
        a_self=a_self,
        a_kx=a_kx,
        alpha=alpha,
        m_frak=mf,
        vanishing_threshold=van,
        birational_threshold=bir,
        jihao_threshold=jihao_threshold(i, mf),
        n_frak=nf,
        n_frak_dominates=None if nf is None else nf >= bir,
        rr_coeffs=(amb.p_self / 2, -amb.kx_p / 2, config.globals.chi_structure),
        side_condition=kx_self + 9 * a_self + 6 * a_kx >= 0,
        alpha_exceeds=alpha > mf - 1,
    )


__all__ = [
    "BoundsReport",
    "HodgeVerdict",
    "MissingDataError",
    "NotBigError",
    "alpha_bound",
    "beta_ha",
    "bounds_report",
    "hodge_check",
    "integrality_index",
    "jihao_threshold",
    "m_frak",
    "n_frak",
    "rr_dimension",
    "thresholds",
]
