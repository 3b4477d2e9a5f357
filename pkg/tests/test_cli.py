"""Command-line interface: exit codes, JSON shape, atomic output."""

import json
import os

import pytest

from cycleforge.cli import main, worker_count


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_lyap_json(capsys):
    code, out, err = run(capsys, "lyap", "--family", "P4", "--N", "1")
    assert code == 0
    data = json.loads(out)
    assert data["quantities"] == ["2/3*a11*a02-2/3*b20*b11"]


def test_unknown_family_is_input_error(capsys):
    code, out, err = run(capsys, "lyap", "--family", "NOPE")
    assert code == 2 and "unknown family" in err


def test_file_family_and_out(tmp_path, capsys):
    src = tmp_path / "fam.json"
    src.write_text(json.dumps({"f": "y", "g": "-x"}))
    dst = tmp_path / "rep.json"
    code, out, err = run(capsys, "singular", "--file", str(src),
                         "--out", str(dst))
    assert code == 0
    data = json.loads(dst.read_text())
    assert data["points"][0]["location"] == {"x": "0", "y": "0"}
    # no temp files left behind
    assert all(not name.startswith(".cycleforge-")
               for name in os.listdir(tmp_path))


def test_malformed_json_is_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out, err = run(capsys, "singular", "--file", str(bad))
    assert code == 2 and "bad.json" in err


def test_bad_binding_is_input_error(capsys):
    code, out, err = run(capsys, "singular", "--family", "P4",
                         "--bind", "a11=two")
    assert code == 2 and "bad rational value" in err


def test_center_certify_strict_negative(capsys):
    # the generic family has no certificate: strict mode exits 1
    code, out, err = run(capsys, "center-certify", "--family", "P4", "--strict")
    assert code == 1
    assert json.loads(out)["certificate"]["kind"] == "none"


def test_center_certify_with_curve(capsys):
    code, out, err = run(capsys, "center-certify", "--family", "P4",
                         "--condition", "C7",
                         "--curve", "a11*x + a02*y + 1")
    assert code == 0
    assert json.loads(out)["certificate"]["kind"] == "darboux"


def test_bifurcate_totals(capsys):
    code, out, err = run(capsys, "bifurcate", "--prop", "T1c")
    assert code == 0
    data = json.loads(out)
    assert data["per_nest"] == 2 and data["total"] == 4
    code, out, err = run(capsys, "bifurcate", "--prop", "P9c")
    assert code == 0
    data = json.loads(out)
    assert data == {"hopf": "one_cycle", "per_nest": 1, "total": 2}


def test_bifurcate_unknown_prop(capsys):
    code, out, err = run(capsys, "bifurcate", "--prop", "XYZ")
    assert code == 2
    code, out, err = run(capsys, "bifurcate")
    assert code == 2


def test_bifurcate_custom_setup(tmp_path, capsys):
    setup = {
        "base": {"f": "y + mu*x*y", "g": "-x + x^2",
                 "variables": ["x", "y", "mu"]},
        "terms": [["P", "alpha", "-(4*x^2 - 1)*y"],
                  ["P", "a", "(4*x^2 - 1)*y^2"],
                  ["Q", "alpha", "(4*y^2 - 1)*x"],
                  ["Q", "b", "(4*y^2 - 1)*x*y"]],
        "alpha": "alpha",
        "point": ["0", "0"],
    }
    src = tmp_path / "setup.json"
    src.write_text(json.dumps(setup))
    code, out, err = run(capsys, "bifurcate", "--setup", str(src))
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == {"kind": "k_plus_ell_cycles", "count": 3}
    assert data["mu0"] == {"exact": "5"}


def test_bifurcate_setup_rejects_bad_term(tmp_path, capsys):
    setup = {"base": {"f": "y", "g": "-x"},
             "terms": [["P", "lam", "x*y"]]}
    src = tmp_path / "setup.json"
    src.write_text(json.dumps(setup))
    code, out, err = run(capsys, "bifurcate", "--setup", str(src))
    assert code == 2 and "lam" in err


def test_eliminate_smoke(capsys):
    code, out, err = run(capsys, "eliminate", "--family", "P4", "--N", "2",
                         "--order", "a11")
    assert code == 0
    stages = json.loads(out)
    assert stages[0]["eliminated_variable"] == "a11"


def test_simulate_csv(tmp_path, capsys):
    dst = tmp_path / "traj.csv"
    code, out, err = run(capsys, "simulate", "--family", "P4",
                         "--bind", "a11=0,a02=0,b20=0,b11=0",
                         "--start", "0.1,0", "--tmax", "1.0",
                         "--samples", "10", "--out", str(dst))
    assert code == 0
    lines = dst.read_text().strip().splitlines()
    assert lines[0] == "t,x,y" and len(lines) == 11


def test_simulate_rejects_bad_tolerance(capsys):
    code, out, err = run(capsys, "simulate", "--family", "P4",
                         "--start", "0.1,0", "--tmax", "1.0",
                         "--rtol", "-1e-8")
    assert code == 2 and "rtol" in err


def test_game_build(tmp_path, capsys):
    src = tmp_path / "game.json"
    src.write_text(json.dumps({"A": [[0, 0], [1, -1]], "B": [[0, 1], [1, 0]]}))
    code, out, err = run(capsys, "game-build", "--file", str(src))
    assert code == 0
    data = json.loads(out)
    assert data["f"] == "2*y" and data["g"] == "2*x" and data["class"] == "X_d0"


def test_berlinskii_raw_pair(tmp_path, capsys):
    src = tmp_path / "fam.json"
    src.write_text(json.dumps({"f": "x^2 - y^2", "g": "x^2 + y^2 - 2"}))
    code, out, err = run(capsys, "berlinskii", "--file", str(src),
                         "--raw-pair")
    assert code == 0
    data = json.loads(out)
    assert data["berlinskii"]["configuration"] == "convex_alternating"


def test_output_is_deterministic(capsys):
    _, out1, _ = run(capsys, "lyap", "--family", "P5", "--N", "2")
    _, out2, _ = run(capsys, "lyap", "--family", "P5", "--N", "2")
    assert out1 == out2


def test_worker_count_env(monkeypatch):
    monkeypatch.delenv("CYCLEFORGE_THREADS", raising=False)
    assert worker_count() == 1
    monkeypatch.setenv("CYCLEFORGE_THREADS", "4")
    assert worker_count() == 4
    monkeypatch.setenv("CYCLEFORGE_THREADS", "zero")
    assert worker_count() == 1
    monkeypatch.setenv("CYCLEFORGE_THREADS", "-3")
    assert worker_count() == 1
