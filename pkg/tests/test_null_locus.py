from fractions import Fraction

import pytest

from foliated_adjoint.null_locus import (
    TAGS,
    NotNegativeDefiniteError,
    NullComponentClass,
    classify_null_locus,
    connected_components,
    egl_torsion_guard,
    fundamental_cycle,
    null_locus,
)
from foliated_adjoint.surface import AdjointParams, QDivisor, parse_configuration
from foliated_adjoint.zariski import negative_part_oracle, negative_part_theorem
from conftest import PASSING, chain_doc, load
from oracles import brute_fundamental_cycle

F = Fraction


def classes(c, params=None):
    params = c.adjoint if params is None else params
    z = negative_part_theorem(c, params)
    return {cls.curves: (cls.tag, cls.singularity_type) for cls in classify_null_locus(c, z)}


def test_fixture_verdicts():
    assert classes(load("egl_cycle")) == {
        ("E1", "E2", "E3"): ("EGL-cycle", "cusp"),
        ("H",): ("FChain-1-1", "cyclic-quotient"),
    }
    assert classes(load("dihedral")) == {("T1", "T2", "Z", "S"): ("DihedralTree", "dihedral-quotient")}
    assert classes(load("case_f")) == {("T1", "T2", "Z"): ("Case-F", "cyclic-quotient")}
    assert classes(load("eps_quarter")) == {("E1", "E2", "E3"): ("Case-G", "non-lc-point")}
    assert classes(load("single_chain_delta")) == {("G1", "G2", "G3"): ("FChain-1-3", "cyclic-quotient")}
    assert classes(load("chainless")) == {}


def test_null_locus_examples():
    eq = load("eps_quarter")
    assert null_locus(eq, negative_part_theorem(eq, eq.adjoint)) == ("E1", "E2", "E3")
    sc = load("single_chain")
    assert null_locus(sc, negative_part_theorem(sc, sc.adjoint)) == ("G1", "G2")


def test_quarter_example_moves_off_at_one_fifth():
    eq = load("eps_quarter")
    p = eq.adjoint.with_epsilon(F(1, 5))
    z = negative_part_theorem(eq, p)
    assert z.positive_dots["E3"] == F(1, 30)
    verdicts = classes(eq, p)
    assert all(tag != "Case-G" for tag, _ in verdicts.values())


@pytest.mark.parametrize("name", PASSING)
def test_no_unclassified_on_passing_fixtures(name):
    c = load(name)
    tags = [t for t, _ in classes(c).values()]
    assert "Unclassified" not in tags
    assert set(tags) <= set(TAGS)
    if c.adjoint.epsilon > 0:
        assert not any(t.startswith("EGL") for t in tags)


def test_curve_cases_recorded():
    c = load("single_chain_delta")
    z = negative_part_theorem(c, c.adjoint)
    (cls,) = classify_null_locus(c, z)
    assert dict(cls.curve_cases) == {"G1": "A", "G2": "E", "G3": "D"}


def _doc(curves, inter, delta=None):
    return parse_configuration({
        "curves": curves,
        "intersections": inter,
        "globals": {"kx_self": 0, "chi_structure": 1},
        "adjoint": {"epsilon": 0, "delta": delta or {}},
    })


def test_boundary_start_is_one_two():
    d = chain_doc([2, 2], {1: 1}, c_delta=1, c_self=1)
    d["curves"][-1]["kf_dot"] = 0
    c = parse_configuration(d)
    assert classes(c) == {("G1", "G2"): ("FChain-1-2", "cyclic-quotient")}


def test_boundary_curve_with_attached_chain():
    c = parse_configuration(chain_doc([2], {1: 1}, c_delta=1, c_self=-1))
    assert classes(c) == {("G1", "C"): ("NonCanonical-5", "cyclic-quotient")}


def test_z2_string_and_nodal_leaf():
    two = [
        {"id": "A", "self_int": -2, "invariant": True, "kf_dot": 0,
         "singularities": [{"point_id": "ab", "h_contrib": 1, "cs_value": "-1"}, {"point_id": "a", "h_contrib": 1, "cs_value": "-1"}]},
        {"id": "B", "self_int": -2, "invariant": True, "kf_dot": 0,
         "singularities": [{"point_id": "ab", "h_contrib": 1, "cs_value": "-1"}, {"point_id": "b", "h_contrib": 1, "cs_value": "-1"}]},
        {"id": "N", "self_int": -1, "pa": 1, "geom_genus": 0, "invariant": True, "kf_dot": 0,
         "singularities": [{"point_id": "n", "h_contrib": 2}]},
    ]
    c = _doc(two, [["A", "B", 1]])
    assert classes(c) == {("A", "B"): ("CyclicZ2Chain", "cyclic-quotient"), ("N",): ("EGL-nodal", "cusp")}


def test_case_c_fallback_and_unclassified():
    curves = [
        # K_F.C = -1 with D.C = 1, excluded from chains by a degenerate singularity
        {"id": "C", "self_int": -2, "invariant": True, "kf_dot": -1,
         "singularities": [{"point_id": "p", "h_contrib": 1, "cs_value": "-2", "reduced_nondegenerate": False}]},
        {"id": "B", "self_int": 1, "invariant": False, "kf_dot": 0, "delta_coeff": 1},
        # a nodal curve whose node splits into two h = 1 points: no template fits
        {"id": "U", "self_int": -1, "pa": 1, "geom_genus": 0, "invariant": True, "kf_dot": 0,
         "singularities": [{"point_id": f"u{k}", "h_contrib": 1} for k in range(2)]},
    ]
    c = _doc(curves, [["C", "B", 1]], {"B": 1})
    z = negative_part_oracle(c, c.adjoint)
    got = {cls.curves: cls for cls in classify_null_locus(c, z)}
    assert got[("C",)].tag == "Case-C"
    assert got[("U",)].tag == "Unclassified" and got[("U",)].evidence


def test_components():
    c = load("two_chain")
    assert connected_components(c, ["A1", "A2", "B1"]) == [("A1", "A2"), ("B1",)]
    assert connected_components(c, c.ids) == [("A1", "A2", "B1", "C")]


@pytest.mark.parametrize(
    "name, comp, cycle, pa",
    [
        ("case_f", ["T1"], {"T1": 1}, 0),
        ("egl_cycle", ["E1", "E2", "E3"], {"E1": 1, "E2": 1, "E3": 1}, 1),
        ("single_chain", ["G1", "G2"], {"G1": 1, "G2": 1}, 0),
        ("dihedral", ["T1", "T2", "Z", "S"], {"T1": 1, "T2": 1, "Z": 2, "S": 1}, 0),
        ("eps_quarter", ["E1", "E2", "E3"], {"E1": 1, "E2": 1, "E3": 2}, 0),
    ],
)
def test_fundamental_cycles(name, comp, cycle, pa):
    c = load(name)
    fc = fundamental_cycle(c, comp)
    assert fc.cycle == QDivisor(cycle) and fc.pa == pa
    ids = [g for g in c.ids if g in comp]
    assert brute_fundamental_cycle(c.gram(ids)) == tuple(cycle[g] for g in ids)


def test_pure_minus_two_cycle_rejected():
    curves = [{"id": k, "self_int": -2, "invariant": True, "kf_dot": 0} for k in "ABC"]
    c = _doc(curves, [["A", "B", 1], ["B", "C", 1], ["A", "C", 1]])
    with pytest.raises(NotNegativeDefiniteError):
        fundamental_cycle(c, ["A", "B", "C"])


def test_egl_guard():
    c = load("egl_cycle")
    z = negative_part_theorem(c, c.adjoint)
    verdicts = {cls.tag: cls for cls in classify_null_locus(c, z)}
    adv = egl_torsion_guard(c, c.adjoint, verdicts["EGL-cycle"])
    assert adv.kind == "torsion-assumption"
    assert egl_torsion_guard(c, c.adjoint, verdicts["FChain-1-1"]) is None
    # a boundary through the leaf replaces the assumption with a note
    d = {
        "curves": [{"id": "E1", "self_int": -2, "invariant": True, "kf_dot": 0},
                   {"id": "B", "self_int": 1, "invariant": False, "kf_dot": 0}],
        "intersections": [["E1", "B", 1]],
        "globals": {"kx_self": 0, "chi_structure": 0},
        "adjoint": {"delta": {"B": "1/2"}},
    }
    cb = parse_configuration(d)
    fake = NullComponentClass("EGL-cycle", "cusp", ("E1",))
    assert egl_torsion_guard(cb, cb.adjoint, fake).kind == "ampleness-note"
