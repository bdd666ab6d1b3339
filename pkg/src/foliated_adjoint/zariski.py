"""Zariski decomposition of K_F + D relative to a curve configuration.

Two independent routes to the negative part N:

* the chain route sums M(D, Theta) over the maximal (D,F)-chains;
* the oracles know nothing about foliations and run the classical
  construction on the intersection matrix alone, either by Fujita's
  iteration or by scanning every negative-definite support.

Nefness is only ever checked against configured curves.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .chains import DFChain, e_chain_divisor, find_f_chains, maximal_df_chains, theta_index
from .linalg import is_negative_definite, solve
from .rational import denominator_lcm, render
from .surface import (
    AdjointParams,
    CurveConfiguration,
    QDivisor,
    adjoint_dot,
    delta_divisor,
    d_dot,
    dot_curve,
    intersection,
    kf_dot_divisor,
    kx_dot_divisor,
)

REGIMES = ("quarter", "half", "unit", "delta-only", "eps-canonical")
MODES = ("fujita", "enumeration")
DEFAULT_ENUM_CAP = 20


class TheoremMismatchError(ArithmeticError):
    """The chain-predicted positive part is negative on a configured curve."""

    def __init__(self, curve: str, value: Fraction, result: "ZariskiResult"):
        super().__init__(f"(K_F+D-V).{curve} = {render(value)} < 0")
        self.curve = curve
        self.value = value
        self.result = result


class NotPseudoEffectiveError(ArithmeticError):
    """No negative-definite support yields a decomposition on this configuration."""


class EnumerationLimitError(RuntimeError):
    pass


class MissingDataError(ValueError):
    def __init__(self, missing: Iterable[str]):
        self.missing = tuple(missing)
        super().__init__("missing data: " + ", ".join(self.missing))


class HypothesisViolationError(ValueError):
    def __init__(self, report: "HypothesisReport"):
        self.report = report
        super().__init__(f"regime {report.regime} hypotheses fail: {report.violations}")


@dataclass(frozen=True)
class ZariskiResult:
    negative: QDivisor
    positive_dots: dict[str, Fraction]
    method: str
    params: AdjointParams
    iterations: int = 0

    @property
    def support(self) -> tuple[str, ...]:
        return self.negative.support

    def null_curves(self) -> tuple[str, ...]:
        return tuple(cid for cid, v in self.positive_dots.items() if v == 0)


@dataclass(frozen=True)
class HypothesisReport:
    regime: str
    violations: tuple[tuple[str | None, str], ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def enumeration_cap() -> int:
    raw = os.environ.get("FOLIATED_ADJOINT_MAX_ENUM")
    return int(raw) if raw else DEFAULT_ENUM_CAP


def _positive_dots(config: CurveConfiguration, params: AdjointParams, n: QDivisor) -> dict[str, Fraction]:
    return {cid: adjoint_dot(config, params, cid) - dot_curve(config, n, cid) for cid in config.ids}


def _is_minus_one_curve(config: CurveConfiguration, cid: str) -> bool:
    c = config.curve(cid)
    return c.self_int == -1 and c.smooth_rational


# --- hypotheses ---------------------------------------------------------------


def check_hypotheses(config: CurveConfiguration, params: AdjointParams, regime: str) -> HypothesisReport:
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}; expected one of {', '.join(REGIMES)}")
    bad: list[tuple[str | None, str]] = []
    eps = params.epsilon

    if regime == "eps-canonical":
        if any(v >= 1 for v in params.delta.values()):
            bad.append((None, "floor-delta"))
        for cid in config.ids:
            c = config.curve(cid)
            if _is_minus_one_curve(config, cid) and c.invariant and c.kf_dot <= 0:
                bad.append((cid, "minimal"))
        limit = eps_canonical_limit(config, params.delta_only())
        if not 0 <= eps <= limit:
            bad.append((None, "epsilon-range"))
        return HypothesisReport(regime, tuple(bad))

    eps_max = {"quarter": Fraction(1, 4), "half": Fraction(1, 2), "unit": Fraction(1), "delta-only": Fraction(0)}[regime]
    lower_2b, kf_2b = {
        "quarter": (Fraction(-1, 4), 0),
        "delta-only": (Fraction(-1, 4), 0),
        "half": (Fraction(-1, 2), 1),
        "unit": (Fraction(-1), 2),
    }[regime]
    if not 0 <= eps <= eps_max:
        bad.append((None, "epsilon-range"))
    for cid in config.ids:
        if not _is_minus_one_curve(config, cid):
            continue
        c = config.curve(cid)
        dg = d_dot(config, params, cid)
        if not c.invariant:
            # K_X.E = -1 on a (-1)-curve
            if c.kf_dot == 1 and eps * c.kx_dot < 0:
                bad.append((cid, "1"))
            continue
        if dg >= 0 and c.kf_dot <= 0 and c.kf_dot + 2 * dg <= 1:
            bad.append((cid, "2a"))
        if lower_2b <= dg < 0 and c.kf_dot <= kf_2b:
            bad.append((cid, "2b"))
    return HypothesisReport(regime, tuple(bad))


# --- chain route --------------------------------------------------------------


def chain_negative_part(config: CurveConfiguration, params: AdjointParams) -> tuple[QDivisor, list[DFChain]]:
    chains = maximal_df_chains(config, params)
    v = QDivisor()
    for df in chains:
        v = v + df.m_divisor
    return v, chains


def negative_part_theorem(
    config: CurveConfiguration, params: AdjointParams, regime: str | None = None
) -> ZariskiResult:
    """N(D) as the sum of M(D, Theta) over maximal (D,F)-chains, post-checked."""
    if regime is not None:
        report = check_hypotheses(config, params, regime)
        if not report.ok:
            raise HypothesisViolationError(report)
    v, _ = chain_negative_part(config, params)
    dots = _positive_dots(config, params, v)
    result = ZariskiResult(v, dots, "theorem", params)
    for cid in v.support:
        if dots[cid] != 0:
            raise ArithmeticError(f"(K_F+D-V).{cid} = {render(dots[cid])} on a chain component")
    for cid in config.ids:
        if dots[cid] < 0:
            raise TheoremMismatchError(cid, dots[cid], result)
    if not is_negative_definite(config.gram(v.support)):
        raise ArithmeticError("chain support is not negative definite")
    return result


# --- oracles ------------------------------------------------------------------


def _solve_on(config: CurveConfiguration, params: AdjointParams, support: list[str]) -> QDivisor:
    rhs = [adjoint_dot(config, params, cid) for cid in support]
    return QDivisor(dict(zip(support, solve(config.gram(support), rhs))))


def _fujita(config: CurveConfiguration, params: AdjointParams) -> ZariskiResult:
    support: list[str] = []
    n = QDivisor()
    rounds = 0
    while True:
        dots = _positive_dots(config, params, n)
        grow = [cid for cid in config.ids if dots[cid] < 0 and cid not in support]
        if not grow:
            return ZariskiResult(n, dots, "oracle-fujita", params, rounds)
        rounds += 1
        if rounds > len(config.ids):
            raise NotPseudoEffectiveError("Fujita iteration failed to stabilise")
        support = [cid for cid in config.ids if cid in support or cid in grow]
        if not is_negative_definite(config.gram(support)):
            raise NotPseudoEffectiveError(
                f"support {support} is not negative definite; K_F+D is not pseudo-effective relative to the configuration"
            )
        n = _solve_on(config, params, support)
        if not n.is_effective():
            raise NotPseudoEffectiveError(f"negative coefficient in {n!r}")


def _enumeration(config: CurveConfiguration, params: AdjointParams, cap: int) -> ZariskiResult:
    pool = [cid for cid in config.ids if config.curve(cid).self_int < 0]
    if len(pool) > cap:
        raise EnumerationLimitError(f"{len(pool)} negative curves exceed the enumeration cap {cap}")
    found: dict[QDivisor, tuple[tuple[str, ...], dict[str, Fraction]]] = {}
    for size in range(len(pool) + 1):
        for subset in combinations(pool, size):
            support = list(subset)
            if support and not is_negative_definite(config.gram(support)):
                continue
            n = _solve_on(config, params, support) if support else QDivisor()
            if not n.is_effective():
                continue
            dots = _positive_dots(config, params, n)
            if any(v < 0 for v in dots.values()):
                continue
            key = tuple(sorted(subset))
            if n not in found or key < found[n][0]:
                found[n] = (key, dots)
    if not found:
        raise NotPseudoEffectiveError("no negative-definite support yields a nef positive part")
    if len(found) > 1:
        raise ArithmeticError(f"{len(found)} distinct decompositions found; uniqueness violated")
    (n, (_, dots)), = found.items()
    return ZariskiResult(n, dots, "oracle-enumeration", params)


def negative_part_oracle(
    config: CurveConfiguration, params: AdjointParams, mode: str = "fujita", cap: int | None = None
) -> ZariskiResult:
    if not config.globals.ambient_pseudoeffective_flag:
        raise NotPseudoEffectiveError("configuration does not assert pseudo-effectivity of K_F+D")
    if mode == "fujita":
        return _fujita(config, params)
    if mode == "enumeration":
        return _enumeration(config, params, enumeration_cap() if cap is None else cap)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass
class Comparison:
    theorem: QDivisor | None
    oracles: dict[str, QDivisor]
    differences: list[tuple[str, str, Fraction, Fraction]] = field(default_factory=list)
    errors: dict[str, str] = field(default_factory=dict)
    mismatch_curve: str | None = None

    @property
    def equal(self) -> bool:
        return not self.differences and not self.errors and self.theorem is not None


def compare_decompositions(
    config: CurveConfiguration, params: AdjointParams, modes: Iterable[str] = MODES
) -> Comparison:
    try:
        theorem: QDivisor | None = negative_part_theorem(config, params).negative
        mismatch = None
    except TheoremMismatchError as exc:
        theorem, mismatch = exc.result.negative, exc.curve
    cmp = Comparison(theorem, {}, mismatch_curve=mismatch)
    if mismatch is not None:
        cmp.errors["theorem"] = f"positive part negative on {mismatch}"
    for mode in modes:
        try:
            cmp.oracles[mode] = negative_part_oracle(config, params, mode).negative
        except (NotPseudoEffectiveError, EnumerationLimitError, ArithmeticError) as exc:
            cmp.errors[mode] = str(exc)
    for mode, n in cmp.oracles.items():
        for cid in sorted(set(n.support) | set(theorem.support)):
            if n[cid] != theorem[cid]:
                cmp.differences.append((mode, cid, theorem[cid], n[cid]))
    return cmp


# --- structural post-checks ---------------------------------------------------


def noninvariant_checks(config: CurveConfiguration, params: AdjointParams) -> list[tuple[str, Fraction, bool]]:
    """(W_C + theta(C) E(C)).E(C) on each non-invariant negative curve.

    Returns (curve, value, assumption) where ``assumption`` records whether
    (K_F+D).C + theta(C) C^2 >= 0 holds; the value is non-negative whenever
    it does.
    """
    chains = maximal_df_chains(config, params)
    out = []
    for cid in config.ids:
        c = config.curve(cid)
        if c.invariant or c.self_int >= 0:
            continue
        theta = theta_index(config, cid, params)
        meeting = [df for df in chains if any(config.dot(cid, g) for g in df.curve_ids)]
        ec = QDivisor.curve(cid)
        wc = adjoint_dot(config, params, cid)
        for df in meeting:
            ec = ec + e_chain_divisor(config, cid, df.chain)
            wc -= dot_curve(config, df.m_divisor, cid)
        value = wc + theta * intersection(config, ec, ec)
        assumption = adjoint_dot(config, params, cid) + theta * c.self_int >= 0
        out.append((cid, value, assumption))
    return out


# --- ambient numbers ----------------------------------------------------------


@dataclass(frozen=True)
class AmbientNumbers:
    adjoint_self: Fraction
    n_self: Fraction
    p_self: Fraction
    kx_p: Fraction


def ambient_numbers(config: CurveConfiguration, z: ZariskiResult) -> AmbientNumbers:
    """P^2 and K_X.P from the supplied ambient products K_F^2 and K_F.K_X."""
    g = config.globals
    missing = [name for name, v in (("ambient_products.kf_self", g.kf_self), ("ambient_products.kf_kx", g.kf_kx)) if v is None]
    if missing:
        raise MissingDataError(missing)
    eps = z.params.epsilon
    delta = delta_divisor(z.params)
    kf_delta = kf_dot_divisor(config, delta)
    kx_delta = kx_dot_divisor(config, delta)
    adj = (
        g.kf_self
        + 2 * kf_delta
        + 2 * eps * g.kf_kx
        + intersection(config, delta, delta)
        + 2 * eps * kx_delta
        + eps * eps * g.kx_self
    )
    n_self = intersection(config, z.negative, z.negative)
    kx_p = g.kf_kx + kx_delta + eps * g.kx_self - kx_dot_divisor(config, z.negative)
    return AmbientNumbers(adj, n_self, adj - n_self, kx_p)


# --- epsilon K_X perturbation -------------------------------------------------


def integrality_of(z: ZariskiResult) -> int:
    values = [v for _, v in z.negative.items()] + [z.params.epsilon] + list(z.params.delta.values())
    return denominator_lcm(values)


def eps_canonical_limit(config: CurveConfiguration, delta_params: AdjointParams) -> Fraction:
    z0 = negative_part_oracle(config, delta_params.delta_only())
    return Fraction(1, 3 * integrality_of(z0))


def volume_bounds(p_self: Fraction, kx_p: Fraction, eps: Fraction, i: int) -> tuple[Fraction, Fraction, Fraction]:
    """(lower, upper, gamma) for P(eps)^2 given P^2 and P.K_X."""
    gamma = max(2 * eps * kx_p / p_self + 1, Fraction(0))
    return (1 - 3 * eps * i) ** 2 * p_self, (1 + gamma) ** 2 * p_self, gamma


@dataclass
class EpsCanonicalReport:
    epsilon: Fraction
    i_delta: int
    limit: Fraction
    nef_claim: bool
    nef_failures: list[str]
    base: ZariskiResult
    perturbed: ZariskiResult
    oracle_equal: bool
    same_support: bool
    null_ok: bool
    unexpected_null: list[str]
    every_chain_df: bool
    volume: dict[str, Fraction] | None
    volume_ok: bool | None
    missing: tuple[str, ...] = ()


def eps_canonical_suite(
    config: CurveConfiguration, delta_params: AdjointParams, epsilon: Fraction | int | str | None = None
) -> EpsCanonicalReport:
    base_params = delta_params.delta_only()
    eps = Fraction(delta_params.epsilon if epsilon is None else Fraction(epsilon))
    base = negative_part_oracle(config, base_params)
    i = integrality_of(base)
    limit = Fraction(1, 3 * i)
    if not 0 <= eps <= limit:
        raise ValueError(f"epsilon {render(eps)} outside [0, {render(limit)}]")
    params = base_params.with_epsilon(eps)

    nef_fail = [cid for cid in config.ids if 3 * i * base.positive_dots[cid] + config.curve(cid).kx_dot < 0]
    perturbed = negative_part_theorem(config, params)
    oracle = negative_part_oracle(config, params)
    f_chains = find_f_chains(config)
    # the chain statement concerns D = eps K_X alone, without the boundary
    pure = AdjointParams(epsilon=eps)
    df_ids = {df.parent.curve_ids for df in maximal_df_chains(config, pure) if df.chain.r == df.parent.r}
    every_df = all(ch.curve_ids in df_ids for ch in f_chains)

    chain_curves = {g for ch in f_chains for g in ch.curve_ids}
    unexpected = [
        cid
        for cid, v in perturbed.positive_dots.items()
        if v == 0
        and cid not in chain_curves
        and not (config.curve(cid).self_int == -2 and config.curve(cid).kx_dot == 0 and base.positive_dots[cid] == 0)
    ]

    volume = None
    volume_ok = None
    missing: tuple[str, ...] = ()
    try:
        amb0 = ambient_numbers(config, base)
        amb = ambient_numbers(config, perturbed)
    except MissingDataError as exc:
        missing = exc.missing
    else:
        if amb0.p_self > 0:
            lo, hi, gamma = volume_bounds(amb0.p_self, amb0.kx_p, eps, i)
            volume = {"p_self": amb0.p_self, "kx_p": amb0.kx_p, "p_eps_self": amb.p_self, "lower": lo, "upper": hi, "gamma": gamma}
            volume_ok = lo <= amb.p_self <= hi
    return EpsCanonicalReport(
        epsilon=eps,
        i_delta=i,
        limit=limit,
        nef_claim=not nef_fail,
        nef_failures=nef_fail,
        base=base,
        perturbed=perturbed,
        oracle_equal=oracle.negative == perturbed.negative,
        same_support=set(perturbed.support) == set(base.support),
        null_ok=not unexpected,
        unexpected_null=unexpected,
        every_chain_df=every_df,
        volume=volume,
        volume_ok=volume_ok,
        missing=missing,
    )
