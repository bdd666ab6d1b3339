"""Residue and index identities along invariant curves.

Each verifier returns the exact residual of its identity, so zero means
the identity holds and anything else shows by how much it fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .chains import ChainMembershipError, e_chain_divisor, maximal_df_chains
from .hj import HJData
from .surface import (
    AdjointParams,
    CurveConfiguration,
    QDivisor,
    intersection,
    verify_cln_residual,
    verify_cs_residual,
    verify_z_residual,
)


class NotInvariantError(ValueError):
    pass


def _invariant(config: CurveConfiguration, cid: str):
    c = config.curve(cid)
    if not c.invariant:
        raise NotInvariantError(f"curve {cid!r} is not invariant")
    return c


def verify_camacho_sad(config: CurveConfiguration, cid: str) -> Fraction | None:
    """C^2 - sum CS; None when some CS value is not representable."""
    return verify_cs_residual(_invariant(config, cid))


def verify_cln(config: CurveConfiguration, cid: str) -> int:
    """sum h_p - (2 - 2g + K_F.C)."""
    return verify_cln_residual(_invariant(config, cid))


def verify_z_formula(config: CurveConfiguration, cid: str) -> int | None:
    return verify_z_residual(_invariant(config, cid))


def chain_cs_values(hj: HJData) -> list[Fraction]:
    """CS index of G_k at its forward node, -mu_{k+1}/mu_k."""
    return [Fraction(-hj.mu[k + 1], hj.mu[k]) for k in range(1, hj.r + 1)]


def chain_cs_closure(hj: HJData) -> list[Fraction]:
    """Residuals G_k^2 - (1/CS_{k-1} + CS_k) along the string; all zero."""
    cs = chain_cs_values(hj)
    out = []
    for k in range(hj.r):
        back = 1 / cs[k - 1] if k else Fraction(0)
        out.append(-hj.e[k] - (back + cs[k]))
    return out


@dataclass(frozen=True)
class ECResult:
    divisor: QDivisor
    self_int: Fraction
    residual: Fraction | None
    node_points: tuple[str, ...]


def ec_divisor(config: CurveConfiguration, cid: str, params: AdjointParams) -> ECResult:
    """E(C) = C + sum E(C, Theta) over maximal (D,F)-chains meeting C.

    For invariant C the residual is E(C)^2 minus the CS sum over the
    singularities of C away from the nodes it shares with those chains.
    """
    chains = maximal_df_chains(config, params)
    for df in chains:
        if cid in df.curve_ids:
            raise ChainMembershipError(f"curve {cid!r} lies in the (D,F)-chain {list(df.curve_ids)}")
    c = config.curve(cid)
    div = QDivisor.curve(cid)
    meeting = [df for df in chains if any(config.dot(cid, g) for g in df.curve_ids)]
    for df in meeting:
        div = div + e_chain_divisor(config, cid, df.chain)
    sq = intersection(config, div, div)
    chain_points = {
        s.point_id for df in meeting for g in df.curve_ids for s in config.curve(g).singularities
    }
    nodes = tuple(sorted(s.point_id for s in c.singularities if s.point_id in chain_points))
    residual: Fraction | None = None
    if c.invariant:
        rest = [s.cs_value for s in c.singular_points if s.point_id not in nodes]
        if all(v is not None for v in rest):
            residual = sq - sum(rest, Fraction(0))
    return ECResult(div, sq, residual, nodes)
