"""F-chains, (D,F)-chains and the index theta(C).

An F-chain is a Hirzebruch-Jung string of invariant smooth rational curves
G_1, ..., G_r with reduced non-degenerate singularities, oriented so that
K_F.G_1 = -1 and K_F.G_k = 0 for k >= 2.  It is a (D,F)-chain when
``sum mu_k D.G_k < 1``; the (D,F)-subchains of an F-chain are exactly its
initial segments satisfying that inequality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .hj import HJData, df_certificate, e_divisor, hj_sequences, m_d_divisor
from .surface import AdjointParams, CurveConfiguration, QDivisor, d_dot


class ChainConsistencyError(ValueError):
    """Two maximal chains share a curve, which a consistent foliation forbids."""


class ChainMembershipError(ValueError):
    """A curve that must lie outside every (D,F)-chain lies inside one."""


@dataclass(frozen=True)
class Chain:
    curve_ids: tuple[str, ...]
    hj: HJData

    @property
    def r(self) -> int:
        return len(self.curve_ids)

    def prefix(self, t: int) -> "Chain":
        return Chain(self.curve_ids[:t], hj_sequences(self.hj.e[:t]))

    def divisor(self, coeffs) -> QDivisor:
        return QDivisor(dict(zip(self.curve_ids, coeffs)))

    def d_vector(self, config: CurveConfiguration, params: AdjointParams) -> list[Fraction]:
        return [d_dot(config, params, g) for g in self.curve_ids]

    def c_vector(self, config: CurveConfiguration, cid: str) -> list[int]:
        return [config.dot(cid, g) for g in self.curve_ids]


@dataclass(frozen=True)
class DFChain:
    chain: Chain
    parent: Chain
    certificate: Fraction
    m_divisor: QDivisor

    @property
    def curve_ids(self) -> tuple[str, ...]:
        return self.chain.curve_ids


@dataclass(frozen=True)
class DFVerdict:
    is_df: bool
    certificate: Fraction
    gamma: tuple[Fraction, ...]

    @property
    def positivity_agrees(self) -> bool:
        # E(A) >= 0 with positive last coefficient, against the mu-sum criterion
        alt = all(g >= 0 for g in self.gamma) and self.gamma[-1] > 0
        return alt == self.is_df


def _chain_candidate(config: CurveConfiguration, cid: str) -> bool:
    c = config.curve(cid)
    return (
        c.invariant
        and c.smooth_rational
        and c.self_int <= -2
        and c.kf_dot in (-1, 0)
        and all(s.reduced_nondegenerate for s in c.singularities)
    )


def find_f_chains(config: CurveConfiguration) -> list[Chain]:
    """All maximal F-chains, ordered by their first curve's position."""
    cand = {cid for cid in config.ids if _chain_candidate(config, cid)}
    paths: list[tuple[str, ...]] = []
    for start in config.ids:
        if start not in cand or config.curve(start).kf_dot != -1:
            continue
        stack = [(start,)]
        while stack:
            path = stack.pop()
            tail = path[-1]
            nexts = [
                nb
                for nb, m in config.neighbors(tail).items()
                if m == 1
                and nb in cand
                and nb not in path
                and config.curve(nb).kf_dot == 0
                and all(config.dot(nb, p) == 0 for p in path[:-1])
            ]
            if not nexts:
                paths.append(path)
            for nb in sorted(nexts, reverse=True):
                stack.append(path + (nb,))
    owner: dict[str, tuple[str, ...]] = {}
    for p in paths:
        for cid in p:
            if cid in owner:
                raise ChainConsistencyError(
                    f"maximal F-chains {list(owner[cid])} and {list(p)} share curve {cid!r}"
                )
            owner[cid] = p
    return [Chain(p, hj_sequences([-config.curve(g).self_int for g in p])) for p in paths]


def is_df_chain(config: CurveConfiguration, chain: Chain, params: AdjointParams) -> DFVerdict:
    d = chain.d_vector(config, params)
    s = df_certificate(chain.hj, d)
    gamma = m_d_divisor(chain.hj, d)
    return DFVerdict(is_df=s < 1, certificate=s, gamma=tuple(gamma))


def _longest_df_prefix(hj: HJData, d: list[Fraction]) -> tuple[int, Fraction]:
    t, s = 0, Fraction(0)
    for k in range(1, hj.r + 1):
        nxt = s + hj.mu[k] * d[k - 1]
        if nxt >= 1:
            break
        t, s = k, nxt
    return t, s


def maximal_df_chains(config: CurveConfiguration, params: AdjointParams) -> list[DFChain]:
    out = []
    for chain in find_f_chains(config):
        d = chain.d_vector(config, params)
        t, s = _longest_df_prefix(chain.hj, d)
        if t == 0:
            continue
        sub = chain.prefix(t)
        out.append(DFChain(sub, chain, s, sub.divisor(m_d_divisor(sub.hj, d[:t]))))
    return out


def extension_admissible(config: CurveConfiguration, df: DFChain, params: AdjointParams) -> bool | None:
    """Whether the next curve of the parent F-chain can be appended.

    Uses D.G_{t+1} < M(D, Theta_t).G_{t+1}, which only involves the last
    coefficient of M(D, Theta_t).  None when the parent has no next curve.
    """
    t = df.chain.r
    if t == df.parent.r:
        return None
    nxt = df.parent.curve_ids[t]
    return d_dot(config, params, nxt) < df.m_divisor[df.curve_ids[-1]]


def _check_outside(cid: str, chains: list[DFChain]) -> None:
    for df in chains:
        if cid in df.curve_ids:
            raise ChainMembershipError(f"curve {cid!r} is a component of the (D,F)-chain {list(df.curve_ids)}")


def theta_chain(config: CurveConfiguration, cid: str, df: DFChain, params: AdjointParams) -> Fraction:
    """Least x >= 0 for which the maximal (D+xC,F)-subchain of df avoids C."""
    _check_outside(cid, maximal_df_chains(config, params))
    return _theta_formula(config, cid, df, params)


def _theta_formula(config: CurveConfiguration, cid: str, df: DFChain, params: AdjointParams) -> Fraction:
    hj = df.chain.hj
    cg = df.chain.c_vector(config, cid)
    j = next((k for k in range(1, hj.r + 1) if cg[k - 1] > 0), None)
    if j is None:
        return Fraction(0)
    d = df.chain.d_vector(config, params)
    s = sum((hj.mu[k] * d[k - 1] for k in range(1, j + 1)), Fraction(0))
    return (1 - s) / (hj.mu[j] * cg[j - 1])


def theta_chain_scan(config: CurveConfiguration, cid: str, df: DFChain, params: AdjointParams) -> Fraction:
    """Direct re-derivation of theta(C, Theta) by scanning every prefix.

    The subchain for D + xC avoids C iff every prefix meeting C fails the
    mu-sum test, i.e. x meets a lower bound per such prefix.
    """
    hj = df.chain.hj
    cg = df.chain.c_vector(config, cid)
    d = df.chain.d_vector(config, params)
    best: Fraction | None = None
    sd = Fraction(0)
    sc = Fraction(0)
    for k in range(1, hj.r + 1):
        sd += hj.mu[k] * d[k - 1]
        sc += hj.mu[k] * cg[k - 1]
        if sc > 0:
            need = max((1 - sd) / sc, Fraction(0))
            best = need if best is None else max(best, need)
    return Fraction(0) if best is None else best


def theta_index(config: CurveConfiguration, cid: str, params: AdjointParams) -> Fraction:
    chains = maximal_df_chains(config, params)
    _check_outside(cid, chains)
    return max((_theta_formula(config, cid, df, params) for df in chains), default=Fraction(0))


def subchain_ladder(config: CurveConfiguration, chain: Chain, params: AdjointParams) -> list[QDivisor]:
    d = chain.d_vector(config, params)
    out = []
    for t in range(1, chain.r + 1):
        sub = chain.prefix(t)
        out.append(sub.divisor(m_d_divisor(sub.hj, d[:t])))
    return out


def e_chain_divisor(config: CurveConfiguration, cid: str, chain: Chain) -> QDivisor:
    """E(C, Theta): supported on the chain, with E.G_k = -C.G_k."""
    return chain.divisor(e_divisor(chain.hj, chain.c_vector(config, cid)))


def xe_combination(hj: HJData, d, c, x) -> list[Fraction]:
    """x E(C,Theta) + M(D+xC, Theta') - M(D, Theta) on positional vectors.

    ``d`` and ``c`` are D.G_k and C.G_k on a (D,F)-chain; Theta' is the
    maximal (D+xC,F)-subchain, empty when even G_1 fails.
    """
    x = Fraction(x)
    d = [Fraction(v) for v in d]
    e = e_divisor(hj, c)
    base = m_d_divisor(hj, d)
    dx = [dv + x * cv for dv, cv in zip(d, c)]
    t, _ = _longest_df_prefix(hj, dx)
    sub = m_d_divisor(hj_sequences(hj.e[:t]), dx[:t]) if t else []
    sub = sub + [Fraction(0)] * (hj.r - t)
    return [x * ev + sv - bv for ev, sv, bv in zip(e, sub, base)]
