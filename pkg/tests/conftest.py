import sys
from pathlib import Path

import pytest

from foliated_adjoint.surface import load_configuration

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# fixtures whose hypotheses hold and whose decomposition the theorem predicts
PASSING = [
    "single_chain",
    "single_chain_delta",
    "two_chain",
    "dihedral",
    "egl_cycle",
    "case_f",
    "eps_quarter",
    "chainless",
]


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.json"


def load(name: str):
    return load_configuration(fixture_path(name))


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def chain_doc(e, attach=None, epsilon=0, c_delta=None, c_self=-1):
    """An F-chain with self-intersections -e plus an optional transverse curve C.

    ``attach`` maps chain positions (1-based) to intersection multiplicities
    with C.  CS values follow the chain's own recursion.
    """
    from fractions import Fraction

    mu = [0, 1]
    for x in e:
        mu.append(x * mu[-1] - mu[-2])
    curves = []
    for k, x in enumerate(e, start=1):
        sing = []
        if k > 1:
            sing.append({"point_id": f"p{k - 1}", "h_contrib": 1, "cs_value": str(Fraction(-mu[k - 1], mu[k]))})
        sing.append({"point_id": f"p{k}", "h_contrib": 1, "cs_value": str(Fraction(-mu[k + 1], mu[k]))})
        curves.append({"id": f"G{k}", "self_int": -x, "invariant": True, "kf_dot": -1 if k == 1 else 0, "singularities": sing})
    inter = [[f"G{k}", f"G{k + 1}", 1] for k in range(1, len(e))]
    adjoint = {"epsilon": str(Fraction(epsilon))}
    if attach:
        c = {"id": "C", "self_int": c_self, "invariant": False, "kf_dot": max(1, -c_self)}
        if c_delta is not None:
            c["delta_coeff"] = str(Fraction(c_delta))
        curves.append(c)
        inter += [[f"G{k}", "C", m] for k, m in sorted(attach.items())]
    return {
        "curves": curves,
        "intersections": inter,
        "globals": {"kx_self": 1, "chi_structure": 1, "ambient_products": {"kf_self": 1, "kf_kx": 1}},
        "adjoint": adjoint,
    }


def chain_config(*args, **kwargs):
    from foliated_adjoint.surface import parse_configuration

    return parse_configuration(chain_doc(*args, **kwargs))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
