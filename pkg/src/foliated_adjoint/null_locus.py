"""Null locus of the positive part and its contractible configurations.

Each connected component of Null P = {C : P.C = 0} is matched against a
fixed list of templates.  Templates test curve-level predicates exactly
(invariance, self-intersection, K_F, D-degree, adjacency, N coefficients)
and record what they checked as evidence.  A component matching nothing
is reported as ``Unclassified``; it is never coerced into a template.

Z-values are derived as K_F.G + 2 - 2 p_a rather than read from inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .chains import DFChain, find_f_chains, maximal_df_chains
from .linalg import is_negative_definite
from .rational import render
from .surface import AdjointParams, CurveConfiguration, QDivisor, d_dot, delta_divisor, dot_curve, intersection, kx_dot_divisor
from .zariski import ZariskiResult

TAGS = (
    "FChain-1-1",
    "FChain-1-2",
    "FChain-1-3",
    "CyclicZ2Chain",
    "DihedralTree",
    "EGL-nodal",
    "EGL-cycle",
    "Case-C",
    "Case-D",
    "Case-E",
    "Case-F",
    "Case-G",
    "NonCanonical-5",
    "Unclassified",
)

SINGULARITY_TYPE = {
    "FChain-1-1": "cyclic-quotient",
    "FChain-1-2": "cyclic-quotient",
    "FChain-1-3": "cyclic-quotient",
    "CyclicZ2Chain": "cyclic-quotient",
    "Case-C": "cyclic-quotient",
    "Case-D": "cyclic-quotient",
    "Case-E": "cyclic-quotient",
    "Case-F": "cyclic-quotient",
    "DihedralTree": "dihedral-quotient",
    "EGL-nodal": "cusp",
    "EGL-cycle": "cusp",
    "Case-G": "non-lc-point",
    "Unclassified": "none",
}


class NotNegativeDefiniteError(ArithmeticError):
    pass


@dataclass(frozen=True)
class NullComponentClass:
    tag: str
    singularity_type: str
    curves: tuple[str, ...]
    evidence: tuple[tuple[str, str], ...] = ()
    curve_cases: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class FundamentalCycle:
    cycle: QDivisor
    pa: int


@dataclass(frozen=True)
class Advisory:
    kind: str
    curves: tuple[str, ...]
    text: str


def null_locus(config: CurveConfiguration, z: ZariskiResult) -> tuple[str, ...]:
    return tuple(cid for cid in config.ids if z.positive_dots[cid] == 0)


def connected_components(config: CurveConfiguration, ids: Iterable[str]) -> list[tuple[str, ...]]:
    pool = set(ids)
    order = [cid for cid in config.ids if cid in pool]
    seen: set[str] = set()
    out = []
    for root in order:
        if root in seen:
            continue
        comp = {root}
        stack = [root]
        while stack:
            cur = stack.pop()
            for nb in config.neighbors(cur):
                if nb in pool and nb not in comp:
                    comp.add(nb)
                    stack.append(nb)
        seen |= comp
        out.append(tuple(cid for cid in order if cid in comp))
    return out


# --- graph shapes -------------------------------------------------------------


def _inner(config: CurveConfiguration, comp: tuple[str, ...], cid: str) -> dict[str, int]:
    return {nb: m for nb, m in config.neighbors(cid).items() if nb in comp}


def _as_path(config: CurveConfiguration, comp: tuple[str, ...]) -> list[str] | None:
    """Order a component as a string of curves meeting once, if it is one."""
    if len(comp) == 1:
        return [comp[0]]
    deg = {cid: _inner(config, comp, cid) for cid in comp}
    if any(len(d) > 2 or any(m != 1 for m in d.values()) for d in deg.values()):
        return None
    ends = sorted(cid for cid, d in deg.items() if len(d) == 1)
    if len(ends) != 2:
        return None
    path = [ends[0]]
    while len(path) < len(comp):
        nxt = [nb for nb in deg[path[-1]] if nb not in path]
        if len(nxt) != 1:
            return None
        path.append(nxt[0])
    return path


def _is_cycle(config: CurveConfiguration, comp: tuple[str, ...]) -> bool:
    if len(comp) < 2:
        return False
    for cid in comp:
        d = _inner(config, comp, cid)
        if sum(d.values()) != 2:
            return False
    return True


# --- per-curve cases ----------------------------------------------------------


def curve_case(config: CurveConfiguration, params: AdjointParams, z: ZariskiResult, cid: str, chains: list[DFChain]) -> str:
    """Which of the invariant-curve cases A-G a null curve falls under."""
    c = config.curve(cid)
    if not c.invariant:
        return "non-invariant"
    dc = d_dot(config, params, cid)
    if any(cid in df.curve_ids for df in chains):
        return "A"
    if c.pa == 1 and c.geom_genus == 0 and dc == 0:
        return "B"
    if not c.smooth_rational:
        return "-"
    if c.kf_dot == -1 and dc == 1:
        return "C"
    if c.kf_dot == 0:
        for df in chains:
            if df.chain.r < df.parent.r and df.parent.curve_ids[df.chain.r] == cid:
                if dot_curve(config, df.m_divisor, cid) == dc:
                    return "E"
        if dc == 0:
            return "D"
    if c.kf_dot == 1 and dc == 0:
        return "F"
    if c.kf_dot == 1 and dc == Fraction(-1, 4):
        return "G"
    return "-"


# --- templates ----------------------------------------------------------------


class _Evidence:
    def __init__(self) -> None:
        self.items: list[tuple[str, str]] = []
        self.failed: tuple[str, str] | None = None

    def check(self, cid: str, label: str, ok: bool) -> bool:
        if ok:
            self.items.append((cid, label))
        elif self.failed is None:
            self.failed = (cid, "fails " + label)
        return ok


def _smooth_invariant(config, cid) -> bool:
    c = config.curve(cid)
    return c.invariant and c.smooth_rational


def _match_fchain(config, params, comp, ev: _Evidence) -> str | None:
    chains = find_f_chains(config)
    for ch in chains:
        r = len(comp)
        if r > ch.r or set(ch.curve_ids[:r]) != set(comp):
            continue
        ids = ch.curve_ids[:r]
        d = [d_dot(config, params, g) for g in ids]
        dfs = [df for df in maximal_df_chains(config, params) if df.parent.curve_ids == ch.curve_ids]
        t = dfs[0].chain.r if dfs else 0
        ev.check(ids[0], "first curve of an F-chain", True)
        if t == r:
            ev.check(ids[-1], f"maximal (D,F)-chain of length {t}", True)
            return "FChain-1-1"
        if t == 0:
            if ev.check(ids[0], "D.G1 = 1", d[0] == 1) and all(
                ev.check(g, "D.G = 0", v == 0) for g, v in zip(ids[1:], d[1:])
            ):
                return "FChain-1-2"
            return None
        gamma_t = dfs[0].m_divisor[ids[t - 1]]
        if ev.check(ids[t], f"D.G_(t+1) = M(D,Theta_t).G_(t+1) = {render(gamma_t)}", d[t] == gamma_t) and all(
            ev.check(g, "D.G = 0", v == 0) for g, v in zip(ids[t + 1 :], d[t + 1 :])
        ):
            return "FChain-1-3"
        return None
    return None


def _match_z2_chain(config, params, comp, ev: _Evidence) -> str | None:
    path = _as_path(config, comp)
    if path is None:
        return None
    for cid in path:
        c = config.curve(cid)
        if not (
            ev.check(cid, "smooth invariant rational", _smooth_invariant(config, cid))
            and ev.check(cid, "Z = 2", c.kf_dot == 0)
            and ev.check(cid, "self-intersection <= -2", c.self_int <= -2)
            and ev.check(cid, "D.G = 0", d_dot(config, params, cid) == 0)
        ):
            return None
    return "CyclicZ2Chain"


def _match_fork(config, params, z, comp, ev: _Evidence) -> str | None:
    """Two (-2) F-chain tips on a Z = 3 centre, then a Z = 2 tail."""
    if len(comp) < 3 or not all(_smooth_invariant(config, g) for g in comp):
        return None
    centres = [g for g in comp if config.curve(g).kf_dot == 1]
    if len(centres) != 1:
        return None
    centre = centres[0]
    nbrs = _inner(config, comp, centre)
    tips = sorted(g for g in nbrs if config.curve(g).kf_dot == -1)
    if len(tips) != 2:
        return None
    for g in tips:
        c = config.curve(g)
        if not (
            ev.check(g, "tip meets centre once", nbrs[g] == 1)
            and ev.check(g, "tip self-intersection -2", c.self_int == -2)
            and ev.check(g, "tip is an end", len(_inner(config, comp, g)) == 1)
            and ev.check(g, "D.G = 0", d_dot(config, params, g) == 0)
            and ev.check(g, "N coefficient 1/2", z.negative[g] == Fraction(1, 2))
        ):
            return None
    c = config.curve(centre)
    if not (
        ev.check(centre, "Z = 3", c.kf_dot == 1)
        and ev.check(centre, "D.C = 0", d_dot(config, params, centre) == 0)
        and ev.check(centre, "self-intersection <= -2", c.self_int <= -2)
    ):
        return None
    tail = [g for g in comp if g not in tips and g != centre]
    if not tail:
        return "Case-F"
    sub = _as_path(config, tuple([centre] + tail))
    if sub is not None and sub[-1] == centre:
        sub.reverse()
    if sub is None or sub[0] != centre:
        ev.check(centre, "tail is a string from the centre", False)
        return None
    for g in tail:
        tc = config.curve(g)
        if not (
            ev.check(g, "Z = 2", tc.kf_dot == 0)
            and ev.check(g, "self-intersection <= -2", tc.self_int <= -2)
            and ev.check(g, "D.G = 0", d_dot(config, params, g) == 0)
        ):
            return None
    return "DihedralTree"


def _match_egl(config, params, comp, ev: _Evidence) -> str | None:
    if len(comp) == 1:
        cid = comp[0]
        c = config.curve(cid)
        sing = c.singular_points
        if (
            c.invariant
            and ev.check(cid, "nodal: p_a = 1, g = 0", c.pa == 1 and c.geom_genus == 0)
            and ev.check(cid, "single singularity with h = 2", len(sing) == 1 and sing[0].h_contrib == 2)
            and ev.check(cid, "D.C = 0", d_dot(config, params, cid) == 0)
        ):
            return "EGL-nodal"
        return None
    if not _is_cycle(config, comp):
        return None
    for cid in comp:
        c = config.curve(cid)
        if not (
            ev.check(cid, "smooth invariant rational", _smooth_invariant(config, cid))
            and ev.check(cid, "singularities only at nodes (K_F.G = 0)", c.kf_dot == 0)
            and ev.check(cid, "self-intersection <= -2", c.self_int <= -2)
            and ev.check(cid, "D.G = 0", d_dot(config, params, cid) == 0)
        ):
            return None
    return "EGL-cycle"


def _match_case_g(config, params, z, comp, ev: _Evidence) -> str | None:
    if len(comp) != 3:
        return None
    centres = [g for g in comp if config.curve(g).kf_dot == 1 and config.curve(g).self_int == -1]
    if len(centres) != 1:
        return None
    centre = centres[0]
    c = config.curve(centre)
    nbrs = _inner(config, comp, centre)
    if not (
        ev.check(centre, "smooth invariant rational", _smooth_invariant(config, centre))
        and ev.check(centre, "epsilon = 1/4", params.epsilon == Fraction(1, 4))
        and ev.check(centre, "D.C = -1/4", d_dot(config, params, centre) == Fraction(-1, 4))
        and ev.check(centre, "meets two curves once each", sorted(nbrs.values()) == [1, 1])
    ):
        return None
    found = {}
    for g in nbrs:
        gc = config.curve(g)
        found[(gc.self_int, d_dot(config, params, g), z.negative[g])] = g
    want = {
        (-2, Fraction(0), Fraction(1, 2)): "N|_C has 1/2 at a (-2)-curve with D.G = 0",
        (-3, Fraction(1, 4), Fraction(1, 4)): "N|_C has 1/4 at a (-3)-curve with D.G = 1/4",
    }
    for key, label in want.items():
        if not ev.check(found.get(key, centre), label, key in found):
            return None
    for g in nbrs:
        if not ev.check(g, "single-curve F-chain end", len(_inner(config, comp, g)) == 1 and config.curve(g).kf_dot == -1):
            return None
    return "Case-G"


def _match_case5(config, params, comp, ev: _Evidence) -> str | None:
    """A boundary curve with tang = 0 carrying F-chains through their first curves."""
    free = [g for g in comp if not config.curve(g).invariant]
    if len(free) != 1:
        return None
    c_id = free[0]
    c = config.curve(c_id)
    if not (
        ev.check(c_id, "tang = 0", c.tang == 0)
        and ev.check(c_id, "C^2 < 0", c.self_int < 0)
        and ev.check(c_id, "boundary coefficient 1", params.delta.get(c_id, 0) == 1)
    ):
        return None
    rest = tuple(g for g in comp if g != c_id)
    chains = {ch.curve_ids: ch for ch in find_f_chains(config)}
    for part in connected_components(config, rest):
        match = [ids for ids in chains if set(ids) == set(part)]
        if not match:
            ev.check(part[0], "F-chain attached to the boundary curve", False)
            return None
        ids = match[0]
        if not (
            ev.check(ids[0], "C meets the first curve once", config.dot(c_id, ids[0]) == 1)
            and all(ev.check(g, "C misses later curves", config.dot(c_id, g) == 0) for g in ids[1:])
            and ev.check(ids[0], "D.G1 = 1", d_dot(config, params, ids[0]) == 1)
            and all(ev.check(g, "D.G = 0", d_dot(config, params, g) == 0) for g in ids[1:])
        ):
            return None
    return "NonCanonical-5"


def classify_component(
    config: CurveConfiguration, params: AdjointParams, z: ZariskiResult, component: Iterable[str]
) -> NullComponentClass:
    comp = tuple(cid for cid in config.ids if cid in set(component))
    chains = maximal_df_chains(config, params)
    cases = tuple((cid, curve_case(config, params, z, cid, chains)) for cid in comp)
    attempts = [
        lambda ev: _match_fchain(config, params, comp, ev),
        lambda ev: _match_z2_chain(config, params, comp, ev),
        lambda ev: _match_fork(config, params, z, comp, ev),
        lambda ev: _match_egl(config, params, comp, ev),
        lambda ev: _match_case_g(config, params, z, comp, ev),
        lambda ev: _match_case5(config, params, comp, ev),
    ]
    failures: list[tuple[str, str]] = []
    for attempt in attempts:
        ev = _Evidence()
        tag = attempt(ev)
        if tag is not None:
            return NullComponentClass(tag, _singularity_type(config, tag, comp), comp, tuple(ev.items), cases)
        if ev.failed is not None:
            failures.append(ev.failed)
    if len(comp) == 1:
        letter = cases[0][1]
        tag = {"C": "Case-C", "D": "Case-D", "E": "Case-E"}.get(letter)
        if tag is not None and config.curve(comp[0]).self_int <= -2:
            return NullComponentClass(tag, SINGULARITY_TYPE[tag], comp, ((comp[0], f"case {letter}"),), cases)
    return NullComponentClass("Unclassified", "none", comp, tuple(failures), cases)


def _singularity_type(config: CurveConfiguration, tag: str, comp: tuple[str, ...]) -> str:
    if tag == "NonCanonical-5":
        # a boundary curve with at most two strings attached is itself a string
        free = next(g for g in comp if not config.curve(g).invariant)
        return "cyclic-quotient" if len(_inner(config, comp, free)) <= 2 and _as_path(config, comp) else "none"
    return SINGULARITY_TYPE[tag]


def classify_null_locus(config: CurveConfiguration, z: ZariskiResult) -> list[NullComponentClass]:
    return [classify_component(config, z.params, z, comp) for comp in connected_components(config, null_locus(config, z))]


# --- fundamental cycles -------------------------------------------------------


def fundamental_cycle(config: CurveConfiguration, component: Iterable[str]) -> FundamentalCycle:
    """Minimal positive integral cycle with Z.G <= 0 on every component (Laufer)."""
    comp = [cid for cid in config.ids if cid in set(component)]
    if not comp or not is_negative_definite(config.gram(comp)):
        raise NotNegativeDefiniteError(f"intersection matrix on {comp} is not negative definite")
    coeff = {cid: 1 for cid in comp}
    while True:
        cyc = QDivisor(coeff)
        bump = next((cid for cid in comp if dot_curve(config, cyc, cid) > 0), None)
        if bump is None:
            break
        coeff[bump] += 1
    sq = intersection(config, cyc, cyc)
    pa = 1 + (sq + kx_dot_divisor(config, cyc)) / 2
    assert pa.denominator == 1
    return FundamentalCycle(cyc, int(pa))


def egl_torsion_guard(config: CurveConfiguration, params: AdjointParams, cls: NullComponentClass) -> Advisory | None:
    if not cls.tag.startswith("EGL"):
        return None
    delta = delta_divisor(params)
    if delta and any(dot_curve(config, delta, g) > 0 for g in cls.curves):
        return Advisory(
            "ampleness-note",
            cls.curves,
            "the boundary meets this elliptic Gorenstein leaf, so no torsion assumption is needed",
        )
    return Advisory(
        "torsion-assumption",
        cls.curves,
        "assumed: the positive part restricted to this cycle is not torsion (not decidable from intersection numbers)",
    )
