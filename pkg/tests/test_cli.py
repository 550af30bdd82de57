from __future__ import annotations

import json

import pytest

from hommeas import formats
from hommeas.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_shapes(capsys, tmp_path):
    assert run(capsys, "build", "--shape", "torus", "--d", "3")[1].startswith("torus: [[18,2,3]]")
    assert "[[15,1,3]]" in run(capsys, "build", "--shape", "cylinder", "--c", "3", "--h", "3")[1]
    out = run(capsys, "build", "--shape", "planar-two-qubit", "--out-dir", str(tmp_path))[1]
    assert "[[47,2," in out
    assert formats.read_code(tmp_path / "code.json").k == 2
    assert formats.read_complex(tmp_path / "complex.json").n_edges == 47
    assert "[[4,0,-]]" in run(capsys, "build", "--shape", "square")[1]


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"shape": "torus", "d": 4}))
    assert "[[32,2,4]]" in run(capsys, "--config", str(cfg), "build")[1]
    assert "[[18,2,3]]" in run(capsys, "--config", str(cfg), "build", "--d", "3")[1]


def test_gadget_build_report(capsys, tmp_path):
    bundle, report = tmp_path / "g.json", tmp_path / "r.json"
    code, out, _ = run(capsys, "gadget", "build", "--d", "3", "--loop", "Z1", "--out", str(bundle), "--report", str(report))
    assert code == 0 and "condition 1      pass" in out
    rep = formats.read_json(report)
    assert rep["condition1"] and rep["condition2"] and rep["cellmap_commutes"] and rep["stabilizers_preserved"]
    assert rep["ancilla"] == {"n": 15, "k": 1, "d_z": 3, "d_x": 3, "d": 3}
    assert rep["measured_group"]["classes"] == ["Z1"]
    assert rep["effective_x_distance"]["value"] == 3
    assert rep["size"]["m"] == 15

    assert run(capsys, "gadget", "validate", str(bundle))[0] == 0
    _, out, _ = run(capsys, "gadget", "measured-group", str(bundle))
    assert out.startswith("rank 1")
    _, out, _ = run(capsys, "gadget", "effdist", str(bundle))
    assert out.startswith("effective X-distance 3")


def test_gadget_width_one_warns(capsys):
    code, out, err = run(capsys, "gadget", "build", "--d", "3", "--loop", "Z1", "--width", "1")
    assert code == 0
    assert "repetition" in out or "repetition" in err
    assert "effective X dist 1" in out


def test_gadget_double_cover_report(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, _, _ = run(capsys, "gadget", "build", "--d", "5", "--loop", "Z1Z2", "--width", "4", "--report", str(report))
    rep = formats.read_json(report)
    assert code == 0 and rep["gamma"]["double_cover_rows"] == 20
    assert rep["measured_group"]["classes"] == ["Z1Z2"]


def test_x_type_gadget(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, _, _ = run(capsys, "gadget", "build", "--d", "3", "--loop", "Z2", "--x-type", "--report", str(report))
    rep = formats.read_json(report)
    assert code == 0 and rep["measurement"] == "X"
    assert rep["condition1"] and rep["condition2"]
    assert rep["measured_group"]["rank"] == 1 and rep["measured_group"]["classes"][0].startswith("X")


def test_explicit_edge_loop(capsys):
    code, out, _ = run(capsys, "gadget", "build", "--d", "3", "--loop", "9,12,15")
    assert code == 0 and "rank 1" in out
    assert run(capsys, "gadget", "build", "--d", "3", "--loop", "0,1")[0] == 1


def test_simulate_csv(capsys, tmp_path):
    bundle = tmp_path / "g.json"
    run(capsys, "gadget", "build", "--d", "3", "--out", str(bundle))
    out_csv = tmp_path / "r.csv"
    code, _, _ = run(capsys, "simulate", "--bundle", str(bundle), "--p", "0.01,0.05", "--trials", "2000", "--seed", "7", "--out", str(out_csv))
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == ",".join(formats.RESULT_COLUMNS) and len(lines) == 3
    _, out, _ = run(capsys, "simulate", "--bundle", str(bundle), "--trials", "0")
    assert out == ",".join(formats.RESULT_COLUMNS) + "\n"
    _, out, _ = run(capsys, "simulate", "--bundle", str(bundle), "--protocol", "shor", "--p", "0", "--trials", "100")
    assert out.splitlines()[1].split(",")[4] == "0"


def test_simulate_errors(capsys, tmp_path):
    assert run(capsys, "simulate")[0] == 1
    assert run(capsys, "simulate", "--bundle", str(tmp_path / "missing.json"))[0] == 1
    bundle = tmp_path / "g.json"
    run(capsys, "gadget", "build", "--d", "3", "--out", str(bundle))
    assert run(capsys, "simulate", "--bundle", str(bundle), "--channels", "cosmic")[0] == 1
    assert run(capsys, "simulate", "--bundle", str(bundle), "--protocol", "shor", "--rounds", "2", "--trials", "10")[0] == 1


def test_distance_command(capsys, tmp_path):
    run(capsys, "build", "--shape", "cylinder", "--c", "3", "--h", "3", "--out-dir", str(tmp_path))
    _, out, _ = run(capsys, "distance", str(tmp_path / "code.json"))
    assert out.split() == ["n=15", "k=1", "d_z=3", "d_x=3"]
    hx, hz = tmp_path / "hx.txt", tmp_path / "hz.txt"
    hx.write_text("1 3\n111\n")
    hz.write_text("1 3\n110\n")
    _, out, _ = run(capsys, "distance", "--h-x", str(hx), "--h-z", str(hz))
    assert out.startswith("n=3 k=1")
    assert run(capsys, "distance")[0] == 1


def test_invalid_gadget_bundle_rejected(capsys, tmp_path):
    bundle = tmp_path / "g.json"
    run(capsys, "gadget", "build", "--d", "3", "--out", str(bundle))
    obj = formats.read_json(bundle)
    obj["gamma"]["bits"][0] = "1" * obj["gamma"]["cols"]
    formats.write_json(bundle, obj)
    code, out, _ = run(capsys, "gadget", "validate", str(bundle))
    assert code == 1 and "FAIL" in out and "witness row" in out
    code, _, err = run(capsys, "gadget", "measured-group", str(bundle))
    assert code == 1 and err.startswith("error")


def test_report_command(capsys):
    _, out, _ = run(capsys, "report", "--ds", "3", "--loops", "Z1,Z1Z2")
    lines = out.splitlines()
    assert len(lines) == 3
    assert lines[1].split()[:5] == ["3", "Z1", "15", "18", "3"]


@pytest.mark.parametrize("argv", [["gadget"], ["bogus"]])
def test_bad_usage(capsys, argv):
    with pytest.raises(SystemExit):
        main(argv)
