"""Acceptance gate: one test per criterion, all exact.

Each test records a PASS/FAIL line; the lines are printed in the terminal
summary (see conftest.py) and also when this file is run as a script.
"""

import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest
import sympy

from foliated_adjoint._kernels import corpus_check
from foliated_adjoint.bounds import alpha_bound, m_frak, n_frak, rr_dimension, thresholds
from foliated_adjoint.chains import find_f_chains, xe_combination
from foliated_adjoint.cli import COMMANDS
from foliated_adjoint.hj import df_certificate, e_divisor, f_chain_a_vector, gamma_r_closed_form, hj_sequences
from foliated_adjoint.linalg import solve
from foliated_adjoint.null_locus import NotNegativeDefiniteError, classify_null_locus, fundamental_cycle
from foliated_adjoint.surface import QDivisor, parse_configuration
from foliated_adjoint.zariski import (
    MissingDataError,
    ambient_numbers,
    compare_decompositions,
    eps_canonical_suite,
    integrality_of,
    negative_part_oracle,
    negative_part_theorem,
)
from conftest import FIXTURES, chain_config, load

pytestmark = pytest.mark.acceptance

F = Fraction
RESULTS: dict[int, str] = {}
MAX_LEN = 8
SAMPLES = 10_000


def record(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def corpus():
    t0 = time.perf_counter()
    count, failures = corpus_check(max_len=MAX_LEN)
    return count, failures, time.perf_counter() - t0


def _rand_frac(rng: random.Random, lo: int, hi: int, den: int = 12) -> Fraction:
    q = rng.randint(1, den)
    return F(rng.randint(lo * q, hi * q), q)


def test_criterion_01_hj_identities(corpus):
    count, failures, secs = corpus
    names = ("recurrence", "endpoints", "wronskian", "m_i_pairing")
    bad = {k: failures[k] for k in names}
    expected = sum(6**r for r in range(1, MAX_LEN + 1))
    ok = count == expected and not any(bad.values()) and secs < 60
    record(1, ok, f"{count} strings, failures {bad}, {secs:.1f}s")


def test_criterion_02_gamma_r_and_positivity():
    rng = random.Random(20260502)
    mismatches = iff_failures = 0
    for _ in range(SAMPLES):
        e = [rng.randint(2, 7) for _ in range(rng.randint(1, 6))]
        hj = hj_sequences(e)
        # D.G_1 free, D.G_k >= 0 after it, so that A.G_k <= 0 for k >= 2
        d = [_rand_frac(rng, -2, 2)] + [_rand_frac(rng, 0, 1) for _ in e[1:]]
        a = f_chain_a_vector(d)
        solved = solve(hj.gram(), [-x for x in a])
        if solved[-1] != gamma_r_closed_form(hj, d):
            mismatches += 1
        ev = e_divisor(hj, a)
        lhs = all(x >= 0 for x in ev) and ev[-1] > 0
        rhs = sum(hj.mu[k] * a[k - 1] for k in range(1, hj.r + 1)) > 0
        if lhs != rhs:
            iff_failures += 1
    record(2, mismatches == 0 and iff_failures == 0,
           f"{SAMPLES} pairs, closed-form mismatches {mismatches}, iff failures {iff_failures}")


def test_criterion_03_cs_closure(corpus):
    count, failures, _ = corpus
    record(3, failures["cs_closure"] == 0, f"{count} strings, closure failures {failures['cs_closure']}")


NAMED = ["single_chain", "two_chain", "dihedral", "egl_cycle", "case_f", "eps_quarter"]


def test_criterion_04_theorem_equals_oracles():
    t0 = time.perf_counter()
    problems = []
    for name in NAMED:
        c = load(name)
        cmp = compare_decompositions(c, c.adjoint)
        if not cmp.equal or set(cmp.oracles) != {"fujita", "enumeration"}:
            problems.append(f"{name}: not equal")
        if any(not 0 <= v < 1 for _, v in cmp.theorem.items()):
            problems.append(f"{name}: coefficient outside [0,1)")
    secs = time.perf_counter() - t0
    record(4, not problems and secs < 10, f"{len(NAMED)} fixtures, {secs:.2f}s, problems {problems}")


def test_criterion_05_quarter_example():
    c = load("eps_quarter")
    z = negative_part_theorem(c, c.adjoint)
    (cls,) = classify_null_locus(c, z)
    e3 = c.curve("E3")
    checks = {
        "epsilon": c.adjoint.epsilon == F(1, 4),
        "N": z.negative == QDivisor({"E1": F(1, 4), "E2": F(1, 2)}),
        "P.E3": z.positive_dots["E3"] == 0,
        "class": (cls.tag, cls.singularity_type) == ("Case-G", "non-lc-point"),
        "KF.E3": e3.kf_dot == 1,
        "D.E3": c.adjoint.epsilon * e3.kx_dot == F(-1, 4),
        "N|E3": (z.negative["E2"] * c.dot("E2", "E3"), z.negative["E1"] * c.dot("E1", "E3")) == (F(1, 2), F(1, 4)),
    }
    fifth = c.adjoint.with_epsilon(F(1, 5))
    z5 = negative_part_theorem(c, fifth)
    checks["P.E3 at 1/5"] = z5.positive_dots["E3"] > 0
    checks["no Case-G at 1/5"] = all(k.tag != "Case-G" for k in classify_null_locus(c, z5))
    failed = [k for k, v in checks.items() if not v]
    record(5, not failed, f"N = 1/4 E1 + 1/2 E2, P.E3 at 1/5 = {z5.positive_dots['E3']}, failed {failed}")


def test_criterion_06_eps_canonical_chains(corpus):
    count, failures, _ = corpus
    record(6, failures["eps_canonical"] == 0, f"{count} strings at eps = 1/n, failures {failures['eps_canonical']}")


def test_criterion_07_fundamental_cycles():
    problems = []
    for name in NAMED + ["single_chain_delta"]:
        c = load(name)
        for ch in find_f_chains(c):
            if fundamental_cycle(c, ch.curve_ids).pa != 0:
                problems.append(f"{name}:{ch.curve_ids}")
    rng = random.Random(7)
    for _ in range(200):
        e = [rng.randint(2, 7) for _ in range(rng.randint(1, 6))]
        cfg = chain_config(e)
        if fundamental_cycle(cfg, cfg.ids).pa != 0:
            problems.append(str(e))
    egl = load("egl_cycle")
    egl_pa = fundamental_cycle(egl, ["E1", "E2", "E3"]).pa
    cycle = parse_configuration({
        "curves": [{"id": k, "self_int": -2, "invariant": True, "kf_dot": 0} for k in "ABC"],
        "intersections": [["A", "B", 1], ["B", "C", 1], ["A", "C", 1]],
        "globals": {"kx_self": 0, "chi_structure": 1},
    })
    try:
        fundamental_cycle(cycle, ["A", "B", "C"])
        rejected = False
    except NotNegativeDefiniteError:
        rejected = True
    ok = not problems and egl_pa == 1 and rejected
    record(7, ok, f"F-chain p_a 0 failures {problems}, egl p_a {egl_pa}, (-2)-cycle rejected {rejected}")


def test_criterion_08_bounds_arithmetic():
    rng = random.Random(88)
    tried = violations = 0
    while tried < SAMPLES:
        a_self = _rand_frac(rng, 0, 20)
        if a_self <= 0:
            continue
        a_kx, kx_self = _rand_frac(rng, -20, 20), _rand_frac(rng, -20, 20)
        if kx_self + 9 * a_self + 6 * a_kx < 0:
            continue
        tried += 1
        if not alpha_bound(a_self, a_kx) > m_frak(a_self, a_kx, kx_self) - 1:
            violations += 1
    m, k, vol, kxp, chi = sympy.symbols("m k vol kxp chi")
    poly = sympy.Rational(1, 2) * m**2 * vol - m / 2 * kxp + chi
    symbolic = sympy.expand(poly.subs(m, m + 2 * k) - 2 * poly.subs(m, m + k) + poly) == vol * k**2
    numeric = True
    for _ in range(200):
        i = rng.randint(1, 6)
        args = (_rand_frac(rng, 0, 9), _rand_frac(rng, -9, 9), rng.randint(-3, 3))
        m0 = i * rng.randint(0, 10)
        second = rr_dimension(m0 + 2 * i, *args) - 2 * rr_dimension(m0 + i, *args) + rr_dimension(m0, *args)
        numeric &= second == args[0] * i * i
    examples = (
        n_frak(F(1, 4), 4, 1) == 24
        and n_frak(F(1, 2), 2, 1) == 12
        and n_frak(F(1, 100), 4, 1) > n_frak(F(1, 10), 4, 1)
        and thresholds(2, 6) == (14, 18)
        and rr_dimension(4, 2, 0, 1) == 17
        and rr_dimension(6, 1, 2, 0) == 12
    )
    ok = violations == 0 and symbolic and numeric and examples
    record(8, ok, f"{tried} triples, violations {violations}, second difference {symbolic and numeric}, examples {examples}")


def test_criterion_09_volume_sandwich():
    checked, problems = [], []
    for path in sorted(FIXTURES.glob("*.json")):
        name = path.stem
        if name in ("malformed", "bad_cs", "violate_2a"):
            continue
        c = load(name)
        base = c.adjoint.delta_only()
        z0 = negative_part_oracle(c, base)
        try:
            if ambient_numbers(c, z0).p_self <= 0:
                continue
        except MissingDataError:
            continue
        i = integrality_of(z0)
        for eps in (F(1, 6 * i), F(1, 4 * i)):
            rep = eps_canonical_suite(c, base, eps)
            checked.append((name, str(eps)))
            if rep.volume_ok is not True:
                problems.append((name, str(eps)))
    record(9, bool(checked) and not problems, f"{len(checked)} (fixture, eps) points, failures {problems}")


def test_criterion_10_xe_nonnegative():
    rng = random.Random(1010)
    negatives = 0
    for _ in range(SAMPLES):
        e = [rng.randint(2, 7) for _ in range(rng.randint(1, 6))]
        hj = hj_sequences(e)
        d, budget = [], F(1)
        for k in range(1, hj.r + 1):
            x = min(_rand_frac(rng, 0, 1), budget / (2 * hj.mu[k]))
            d.append(x)
            budget -= hj.mu[k] * x
        assert df_certificate(hj, d) < 1
        c = [0] * hj.r
        c[rng.randrange(hj.r)] = rng.randint(1, 2)
        x = _rand_frac(rng, 0, 3)
        if any(v < 0 for v in xe_combination(hj, d, c, x)):
            negatives += 1
    record(10, negatives == 0, f"{SAMPLES} instances, negative combinations {negatives}")


def _cli(command: str, path: str) -> bytes:
    proc = subprocess.run(
        [sys.executable, "-m", "foliated_adjoint.cli", command, path, "--format", "structured"],
        capture_output=True,
    )
    return proc.stdout


def test_criterion_11_determinism():
    differing = []
    runs = 0
    for path in sorted(FIXTURES.glob("*.json")):
        for command in COMMANDS:
            first, second = _cli(command, str(path)), _cli(command, str(path))
            runs += 1
            if first != second or not first:
                differing.append(f"{command}:{path.stem}")
    record(11, not differing, f"{runs} command/fixture pairs run twice, differing {differing}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
