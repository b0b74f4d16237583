import json
from pathlib import Path

import pytest

from weightkit.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, run_command
from weightkit.fileformat import complex_from_json, parse_document
from weightkit.fixtures import Pb, T2

FIX = Path(__file__).resolve().parent.parent / "fixtures"
PAIR = str(FIX / "pair.cplx")
PB = str(FIX / "pb.cplx")
DUAL = str(FIX / "dual.cplx")


def run(capsys, *argv):
    code = run_command([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


# -- kills ------------------------------------------------------------------------------

def test_kills_weight_zero(capsys):
    code, out, _ = run(capsys, "kills", "--input", PAIR, "--map", "f", "--range", 0, 0)
    assert code == EXIT_OK
    assert "kills: yes" in out and "certificate" in out


def test_kills_weight_one_fails_with_obstruction(capsys):
    code, res = run_json(capsys, "kills", "--input", PAIR, "--map", "f", "--range", 1, 1)
    assert code == EXIT_FAIL
    assert res["kills"] is False and res["pointwise"] == {"1": False}
    assert any("Ext class" in r for r in res["obstruction"])


@pytest.mark.parametrize("mode", ["1", "3", "5", "7", "8", "9", "9f"])
def test_kills_modes_agree(capsys, mode):
    assert run(capsys, "kills", "--input", PAIR, "--map", "f", "--range", 0, 0, "--mode", mode)[0] == EXIT_OK
    assert run(capsys, "kills", "--input", PAIR, "--map", "f", "--range", 1, 1, "--mode", mode)[0] == EXIT_FAIL


def test_kills_over_dual_numbers(capsys):
    code, res = run_json(capsys, "kills", "--input", DUAL, "--map", "f", "--range", 0, 0)
    # f = (0, e) is d x with x = 1 in degree 0
    assert code == EXIT_OK and res["kills"] is True


# -- analyze / avoid / hom ------------------------------------------------------------------

def test_analyze_json_round_trips(capsys):
    code, res = run_json(capsys, "analyze", "--input", PB)
    assert code == EXIT_OK
    (rep,) = res["reports"]
    assert complex_from_json(rep["complex"]) == Pb()
    assert rep["consistent"] and rep["avoided_ranges"] == [[0, 0]]
    assert sorted(rep["pieces"]) == sorted(["Free{1}", "Free{-1}"])
    assert rep["skeleton"] == {"least_le": 1, "greatest_ge": -1, "contractible": False}


def test_analyze_text_and_certificates(capsys):
    code, out, _ = run(capsys, "analyze", "--input", PAIR, "--object", "T2", "--certificates")
    assert code == EXIT_OK
    assert "== complex T2 ==" in out
    code, res = run_json(capsys, "analyze", "--input", PB, "--certificates")
    assert res["reports"][0]["certificates"]["0..0"]["verified"] is True


def test_analyze_contractible_complex(capsys):
    code, res = run_json(capsys, "analyze", "--input", DUAL, "--object", "C")
    rep = res["reports"][0]
    assert code == EXIT_OK and rep["skeleton"]["contractible"] is True
    assert rep["pieces"] is None


def test_avoid(capsys):
    code, res = run_json(capsys, "avoid", "--input", PB, "--object", "Pb", "--range", 0, 0)
    assert code == EXIT_OK and res["verified"]
    assert res["euler_characteristics"] == [-1, -1]
    code, res = run_json(capsys, "avoid", "--input", PAIR, "--object", "T2", "--range", 0, 0)
    assert code == EXIT_FAIL and res["obstruction"]["pieces_meeting_range"] == ["Torsion{0,2}"]
    code, res = run_json(capsys, "avoid", "--input", DUAL, "--object", "C", "--range", 0, 0)
    assert code == EXIT_OK and res["without_weights"] is True


def test_hom(capsys):
    code, res = run_json(capsys, "hom", "--input", PAIR, "--src", "T2", "--tgt", "S1")
    assert code == EXIT_OK
    assert res["formula_matches"] is True
    assert res["hom"] == res["ext_part"]


# -- check-example ------------------------------------------------------------------------------

def test_check_example_a(capsys):
    code, res = run_json(capsys, "check-example", "a")
    assert code == EXIT_OK
    assert res["degenerate"] and res["parities"] == [1, 1] and not res["decomposable_in_category"]


def test_check_example_b(capsys):
    code, out, _ = run(capsys, "check-example", "b")
    assert code == EXIT_OK
    assert "without weight 0: True" in out
    code, res = run_json(capsys, "check-example", "b")
    assert res["obstructed"] and all(c % 2 for c in res["euler_characteristics"])


# -- oracle --------------------------------------------------------------------------------------

def test_oracle_list(capsys):
    code, out, _ = run(capsys, "oracle", "--list")
    assert code == EXIT_OK and "pkillw-equivalence" in out.split()


def test_oracle_short_run(capsys):
    code, res = run_json(capsys, "oracle", "--battery", "hom-formula", "--trials", 4, "--seed", 11)
    (rep,) = res["reports"]
    assert code == EXIT_OK and rep["passed"] and rep["seed"] == 11


def test_oracle_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("WEIGHTKIT_SEED", "77")
    code, res = run_json(capsys, "oracle", "--battery", "skeleton", "--trials", 2)
    assert res["reports"][0]["seed"] == 77
    monkeypatch.setenv("WEIGHTKIT_SEED", "abc")
    assert run(capsys, "oracle", "--battery", "skeleton", "--trials", 2)[0] == EXIT_USAGE


def test_figures_are_written(capsys, tmp_path):
    fig = tmp_path / "pb.png"
    assert run(capsys, "analyze", "--input", PB, "--figure", fig)[0] == EXIT_OK
    assert fig.stat().st_size > 0
    fig2 = tmp_path / "battery.png"
    assert run(capsys, "oracle", "--battery", "skeleton", "--trials", 3, "--figure", fig2)[0] == EXIT_OK
    assert fig2.stat().st_size > 0


# -- usage errors ----------------------------------------------------------------------------------

def test_missing_file(capsys):
    code, _, err = run(capsys, "analyze", "--input", "missing.cplx")
    assert code == EXIT_USAGE and "missing.cplx" in err


def test_parse_error_reports_position(capsys, tmp_path):
    bad = tmp_path / "bad.cplx"
    bad.write_text("ring Z\ncomplex A\ndegrees 0 0\ndim 0 x\n")
    code, _, err = run(capsys, "analyze", "--input", bad)
    assert code == EXIT_USAGE and f"{bad}:4:7:" in err


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["kills", "--input", PAIR, "--map", "nope", "--range", "0", "0"],
    ["kills", "--input", PAIR, "--map", "f", "--range", "1", "0"],
    ["kills", "--input", PAIR, "--map", "f", "--range", "0"],
    ["avoid", "--input", PAIR, "--object", "nope", "--range", "0", "0"],
    ["hom", "--input", PAIR, "--src", "T2", "--tgt", "nope"],
    ["oracle", "--battery", "nonexistent"],
    ["oracle"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_USAGE and err.startswith("error:")
