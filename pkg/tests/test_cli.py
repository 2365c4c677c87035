import json

import numpy as np
import pytest

from dicert.cli import main
from dicert.formats import load_state, load_witness, save_state, save_witness, table_to_csv, table_to_json
from dicert.network import canonical_config, probability_table
from dicert.states import DensityMatrix, isotropic
from dicert.witness import witness_from_state


@pytest.fixture
def state_file(tmp_path):
    def make(p, name=None):
        path = tmp_path / (name or f"iso_{p}.json")
        save_state(isotropic(p), path)
        return str(path)
    return make


def test_state_round_trip(tmp_path):
    rho = DensityMatrix(np.array([[0.5, 0.25j, 0, 0], [-0.25j, 0.5, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]), (2, 2))
    save_state(rho, tmp_path / "s.json")
    back = load_state(tmp_path / "s.json")
    np.testing.assert_array_equal(back.matrix, rho.matrix)
    assert back.dims == (2, 2)


def test_witness_round_trip(tmp_path):
    ws = witness_from_state(isotropic(0.8))
    save_witness(ws, tmp_path / "w.json")
    doc = json.loads((tmp_path / "w.json").read_text())
    assert doc["omega"]["axes"] == ["c", "d", "z", "w"]
    back = load_witness(tmp_path / "w.json")
    np.testing.assert_allclose(back.omega, ws.omega)


def test_table_exports():
    table = probability_table(canonical_config(isotropic(0.8)))
    text = table_to_csv(table)
    lines = text.splitlines()
    assert lines[0] == f"# config_digest={table.digest}"
    assert lines[1] == "z,x,y,w,c,a,b,d,p"
    assert len(lines) == 2 + 3 * 7 * 7 * 3 * 16
    doc = table_to_json(table)
    assert len(doc["rows"]) == 3 * 7 * 7 * 3 * 16


def test_certify_entangled(state_file, tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["certify", "--state", state_file(0.8), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert abs(rep["I_value"] + 0.021875) < 1e-9
    assert rep["verdict"] == "entangled"
    assert "entangled" in capsys.readouterr().err


def test_certify_ppt(state_file, capsys):
    assert main(["certify", "--state", state_file(0.2)]) == 3
    assert "PPT input" in capsys.readouterr().err


def test_certify_selftest_failed(state_file):
    assert main(["certify", "--state", state_file(0.8), "--visibility", "0.9"]) == 2


def test_certify_not_detected_with_witness(state_file, tmp_path):
    wpath = tmp_path / "w.json"
    save_witness(witness_from_state(isotropic(0.8)), wpath)
    assert main(["certify", "--state", state_file(1 / 3), "--witness", str(wpath)]) == 1


def test_certify_truncated_json(tmp_path, state_file):
    text = open(state_file(0.8)).read()
    bad = tmp_path / "bad.json"
    bad.write_text(text[: len(text) // 2])
    assert main(["certify", "--state", str(bad)]) == 3


def test_certify_non_psd(tmp_path):
    bad = tmp_path / "neg.json"
    m = np.diag([1.5, -0.5, 0, 0])
    bad.write_text(json.dumps({"dims": [2, 2], "matrix": [[[v, 0] for v in row] for row in m]}))
    assert main(["certify", "--state", str(bad)]) == 3


def test_certify_missing_file():
    assert main(["certify", "--state", "/nonexistent/state.json"]) == 3


def test_sweep_csv(state_file, tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--state", state_file(1.0), "--grid", "0,0.5,1", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "v,J,I,detected"
    J = [float(r.split(",")[1]) for r in rows[1:]]
    np.testing.assert_allclose(J, [0, 4.242640687, 8.485281374], atol=1e-9)


def test_sweep_deterministic(state_file, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["sweep", "--state", state_file(0.8), "--grid", "0.2,0.7,1", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep_json_reports_threshold(state_file, tmp_path):
    out = tmp_path / "s.json"
    assert main(["sweep", "--state", state_file(0.8), "--grid", "1", "--format", "json", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert abs(doc["detection_threshold"] - np.sqrt(1 / 2.4)) < 1e-9


@pytest.mark.parametrize("grid", ["", " , ", "0,abc", "0,2"])
def test_sweep_bad_grid(state_file, grid):
    assert main(["sweep", "--state", state_file(0.8), "--grid", grid]) == 3


def test_baseline_single_sample(capsys):
    assert main(["baseline", "--samples", "1", "--terms", "1", "--seed", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["sound"] and doc["min_I_normal"] >= 0


def test_baseline_deterministic(capsys):
    main(["baseline", "--samples", "20", "--seed", "11"])
    first = json.loads(capsys.readouterr().out)
    main(["baseline", "--samples", "20", "--seed", "11"])
    assert json.loads(capsys.readouterr().out) == first


def test_baseline_bad_samples():
    assert main(["baseline", "--samples", "0"]) == 3


@pytest.mark.slow
def test_baseline_thousand(capsys):
    assert main(["baseline", "--samples", "1000", "--seed", "7"]) == 0


def test_selftest_command(state_file, capsys):
    assert main(["selftest"]) == 0
    assert main(["selftest", "--visibility", "0.99", "--tolerance", "1e-9"]) == 2
    assert main(["selftest", "--visibility", "0.999", "--tolerance", "0.1"]) == 0


def test_table_and_isotropic_commands(tmp_path):
    s = tmp_path / "s.json"
    assert main(["isotropic", "--p", "0.8", "--out", str(s)]) == 0
    out = tmp_path / "t.csv"
    assert main(["table", "--state", str(s), "--out", str(out)]) == 0
    assert out.read_text().splitlines()[1] == "z,x,y,w,c,a,b,d,p"
    w = tmp_path / "w.json"
    assert main(["witness", "--state", str(s), "--out", str(w)]) == 0
    assert load_witness(w).dims == (2, 2)


def test_bad_arguments():
    assert main(["certify"]) == 3
    assert main(["certify", "--state", "x.json", "--visibility", "2"]) == 3
