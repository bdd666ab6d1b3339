import json
import subprocess
import sys

import pytest

from foliated_adjoint.cli import COMMANDS, dump_structured, main, run
from conftest import fixture_path


def structured(command, name, *extra):
    code, out = run([command, str(fixture_path(name)), "--format", "structured", *extra])
    return code, json.loads(out)


def test_verify_exit_codes():
    assert structured("verify", "single_chain")[0] == 0
    code, doc = structured("verify", "bad_cs")
    assert code == 2
    assert doc["result"]["violations"][0]["code"] == "cs-residual"
    assert doc["result"]["residuals"]["G2"]["camacho_sad"] == "-1/2"
    code, doc = structured("verify", "malformed")
    assert code == 1 and "invalid JSON" in doc["result"]["error"]


def test_other_commands_refuse_invalid_input():
    for cmd in ("chains", "zariski", "classify", "bounds"):
        assert structured(cmd, "bad_cs")[0] == 2
        assert structured(cmd, "malformed")[0] == 1


def test_chains_inventory():
    _, doc = structured("chains", "single_chain")
    (chain,) = doc["result"]["chains"]
    assert chain["maximal_df_chain"]["m_divisor"] == {"G1": "3/5", "G2": "1/5"}
    assert doc["result"]["theta"] == {"C": "1/2"}
    _, doc = structured("chains", "eps_quarter")
    got = {tuple(c["curves"]): c["maximal_df_chain"]["m_divisor"] for c in doc["result"]["chains"]}
    assert got == {("E1",): {"E1": "1/4"}, ("E2",): {"E2": "1/2"}}
    assert structured("chains", "chainless")[1]["result"]["chains"] == []


def test_zariski_headline(capsys):
    assert main(["zariski", str(fixture_path("two_chain"))]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "THEOREM == ORACLE"
    assert main(["zariski", str(fixture_path("violate_2a")), "--regime", "quarter"]) == 3
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "THEOREM != ORACLE"
    assert "2a" in out
    code, doc = structured("zariski", "chainless")
    assert code == 0 and doc["result"]["theorem"] == {} and doc["result"]["equal"]


def test_zariski_single_mode_and_epsilon():
    code, doc = structured("zariski", "eps_quarter", "--mode", "enumeration", "--epsilon", "1/5")
    assert code == 0
    assert set(doc["result"]["oracles"]) == {"enumeration"}
    assert doc["result"]["positive_dots"]["E3"] == "1/30"
    assert structured("zariski", "eps_quarter", "--epsilon", "0.2")[0] == 1


def test_zariski_eps_canonical_regime():
    code, doc = structured("zariski", "single_chain", "--regime", "eps-canonical", "--epsilon", "1/30")
    assert code == 0
    rep = doc["result"]["eps_canonical"]
    assert rep["volume_ok"] and rep["every_chain_df"] and rep["i_delta"] == 5
    code, doc = structured("zariski", "single_chain", "--regime", "eps-canonical", "--epsilon", "1/10")
    assert not doc["result"]["hypotheses"]["ok"]


def test_classify_labels(capsys):
    main(["classify", str(fixture_path("egl_cycle"))])
    assert "EGL-cycle / cusp" in capsys.readouterr().out
    main(["classify", str(fixture_path("dihedral"))])
    assert "DihedralTree / dihedral-quotient" in capsys.readouterr().out
    main(["classify", str(fixture_path("eps_quarter"))])
    assert "NonCanonical-5-analog (Case-G) / non-lc-point" in capsys.readouterr().out
    _, doc = structured("classify", "egl_cycle")
    egl = doc["result"]["components"][0]
    assert egl["fundamental_cycle"]["pa"] == 1
    assert egl["advisory"]["kind"] == "torsion-assumption"


def test_bounds_outputs():
    code, doc = structured("bounds", "dihedral", "--jihao")
    res = doc["result"]
    assert code == 0
    assert (res["i_index"], res["alpha"], res["vanishing_threshold"], res["birational_threshold"]) == (2, 6, 14, 18)
    assert res["jihao_threshold"] == 2 * (-1 + 1)
    code, doc = structured("bounds", "case_f")
    assert code == 4
    assert doc["result"]["missing"] == ["ambient_products.kf_self", "ambient_products.kf_kx"]
    code, doc = structured("bounds", "egl_cycle")
    assert doc["result"]["advisories"][0]["kind"] == "torsion-assumption"
    assert structured("bounds", "violate_2a")[0] == 3


@pytest.mark.parametrize("command", COMMANDS)
def test_structured_round_trip(command):
    _, text = run([command, str(fixture_path("eps_quarter")), "--format", "structured"])
    assert dump_structured(json.loads(text)) == text


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "foliated_adjoint.cli", "zariski", str(fixture_path("single_chain"))],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("THEOREM == ORACLE")


def test_usage_error_is_input_error():
    with pytest.raises(SystemExit) as exc:
        run(["nope", str(fixture_path("single_chain"))])
    assert exc.value.code == 1
