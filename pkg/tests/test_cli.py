import json

import pytest

from dtvertex.cli import main
from dtvertex.geometry import c4, dt_invariant
from dtvertex.rational import RationalFunction


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_vertex_signs(capsys):
    code, out, err = run(capsys, "verify", "vertex-signs", "--max-size", "4")
    rep = json.loads(out)
    assert code == 0
    assert rep["checked"] == 246 and rep["failures"] == []
    assert rep["report_version"] == 1 and rep["command"] == "verify vertex-signs"
    assert "wall_time_s" not in rep
    assert "status 0" in err


def test_count_only(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "6", "--count-only")
    assert code == 0 and out == "140\n"
    code, out, _ = run(capsys, "enumerate", "--kind", "plane", "--n", "5", "--count-only")
    assert out == "24\n"


def test_enumerate_listing(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "2")
    rep = json.loads(out)
    assert rep["count"] == 4 and len(rep["partitions"]) == 4


def test_curve_enumerate_with_legs_file(tmp_path, capsys):
    legs = tmp_path / "legs.json"
    legs.write_text(json.dumps([[[0, 0, 0]], [], [], []]))
    code, out, _ = run(capsys, "enumerate", "--kind", "curve", "--legs", str(legs), "--kmax", "1")
    rep = json.loads(out)
    assert code == 0 and rep["count"] == len(rep["partitions"]) > 1


def test_dt_value(capsys):
    code, out, _ = run(capsys, "dt", "--n", "2")
    rep = json.loads(out)
    assert code == 0 and rep["terms"] == 4
    assert RationalFunction.from_json(rep["value"]) == dt_invariant(c4(), 2).value


def test_dt_series_and_modes(capsys):
    code, out, _ = run(capsys, "dt-series", "--n-max", "2", "--mode", "k-theoretic")
    rep = json.loads(out)
    assert code == 0 and [r["terms"] for r in rep["results"]] == [1, 4]
    code, out, _ = run(capsys, "dt", "--n", "1", "--mode", "elliptic", "--order", "1", "--insertion", "mass")
    rep = json.loads(out)
    assert code == 0 and len(rep["series"]) == 2


def test_unknown_config_field(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"max_size": 2, "bogus": 1}))
    code, out, err = run(capsys, "verify", "vertex-signs", "--config", str(cfg))
    assert code == 2 and out == "" and "bogus" in err


def test_config_values_used(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"max_size": 2}))
    code, out, _ = run(capsys, "verify", "vertex-signs", "--config", str(cfg))
    assert json.loads(out)["checked"] == 6 * 5
    # command-line flags override the file
    code, out, _ = run(capsys, "verify", "vertex-signs", "--config", str(cfg), "--max-size", "1")
    assert json.loads(out)["checked"] == 6


@pytest.mark.parametrize("argv", [
    ["verify", "vertex-signs", "--max-size", "-1"],
    ["enumerate", "--n", "-3"],
    ["dt", "--parallel", "0"],
    ["dt", "--geometry", "KP3", "--d", "1,2"],
    ["dt", "--geometry", "KP3", "--insertion", "mass", "--d", "0,0,0,0,0,0"],
    ["dt", "--vertex-axes", "7"],
    ["dt", "--geometry", "KP3", "--d", "0,0,0,0,0,0", "--edge-axes", "1"],
    ["enumerate", "--kind", "curve"],
])
def test_bad_input_exit_2(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 2 and out == ""


def test_reports_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["verify", "curve-signs", "--legs-budget", "1", "--output", str(a)])
    main(["verify", "curve-signs", "--legs-budget", "1", "--parallel", "2", "--output", str(b)])
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_parallel_env(monkeypatch, capsys):
    _, serial, _ = run(capsys, "dt", "--n", "3")
    monkeypatch.setenv("DTVERTEX_PARALLEL", "2")
    _, par, _ = run(capsys, "dt", "--n", "3")
    assert serial == par
    monkeypatch.setenv("DTVERTEX_PARALLEL", "x")
    code, _, _ = run(capsys, "dt", "--n", "1")
    assert code == 2


def test_timing_flag(capsys):
    _, out, _ = run(capsys, "verify", "vertex-signs", "--max-size", "1", "--timing")
    assert "wall_time_s" in json.loads(out)


def test_csv(capsys):
    code, out, _ = run(capsys, "verify", "vertex-signs", "--max-size", "2", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "key,value"
    assert "checked,30" in lines


def test_local_curve_file(tmp_path, capsys):
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"kind": "LocalCurve", "m": [-1, -1, 0]}))
    code, out, _ = run(capsys, "dt", "--geometry", str(g), "--d", "1", "--n", "1")
    rep = json.loads(out)
    assert code == 0 and rep["terms"] == 1
