import csv
import json
import math

import pytest

from digraph_consensus.cli import main


def write(tmp_path, obj, name="g.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


PATH = {"n": 2, "edges": [[1, 2, 1]]}
CYCLE2 = {"n": 2, "edges": [[1, 2, 1], [2, 1, 1]]}
CYCLE3 = {"n": 3, "edges": [[1, 2, 1], [2, 3, 1], [3, 1, 1]]}


def test_analyze_path(tmp_path, capsys):
    code, out, _ = run(capsys, "analyze", "-i", write(tmp_path, PATH))
    rep = json.loads(out)
    assert code == 0
    assert rep["d"] == 1 and rep["rank"] == 1 and rep["J"] == [[1.0, 0.0], [1.0, 0.0]]
    assert rep["audit"]["passed"]


def test_analyze_empty(tmp_path, capsys):
    code, out, _ = run(capsys, "analyze", "-i", write(tmp_path, {"n": 3, "edges": []}), "--forests")
    rep = json.loads(out)
    assert code == 0 and rep["d"] == 3
    assert rep["J"] == [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    assert rep["forests"]["list"] == [{"arcs": [], "roots": [1, 2, 3], "weight": 1.0}]


@pytest.mark.parametrize("text", ['{"n": 2, "edges": [[1, 2, 1]', '{"n": 2, "edges": [[1, 5, 1]]}'])
def test_analyze_malformed(tmp_path, capsys, text):
    code, _, err = run(capsys, "analyze", "-i", write(tmp_path, text))
    assert code == 2 and err.startswith("error:")


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", "-i", str(tmp_path / "nope.json"))
    assert code == 2 and "cannot read" in err


def test_simulate_discrete_endpoint(tmp_path, capsys):
    code, out, _ = run(capsys, "simulate", "-i", write(tmp_path, CYCLE2), "--model", "discrete", "--eps", "1", "--steps", "20", "--x0", "0,1")
    rep = json.loads(out)
    assert code == 0
    assert rep["verdict"] == "oscillating" and rep["prediction"] == "tree exists"


def test_simulate_bad_eps(tmp_path, capsys):
    code, _, err = run(capsys, "simulate", "-i", write(tmp_path, CYCLE2), "--model", "discrete", "--eps", "2")
    assert code == 2 and "bound 1" in err


def test_simulate_continuous_csv(tmp_path, capsys):
    out_path = tmp_path / "traj.csv"
    code, out, _ = run(capsys, "simulate", "-i", write(tmp_path, CYCLE3), "--format", "csv", "-o", str(out_path))
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "converged" and rep["consistent"]
    rows = list(csv.reader(out_path.open()))
    assert rows[0] == ["t", "x_1", "x_2", "x_3", "disagreement"]
    assert float(rows[-1][-1]) < 1e-6


@pytest.mark.parametrize("model", ["oscillator", "double-integrator"])
def test_simulate_other_models(tmp_path, capsys, model):
    code, out, _ = run(capsys, "simulate", "-i", write(tmp_path, CYCLE3), "--model", model, "--v0", "0,1,0")
    assert code == 0 and json.loads(out)["verdict"] == "converged"


def test_simulate_bad_vector(tmp_path, capsys):
    code, _, err = run(capsys, "simulate", "-i", write(tmp_path, CYCLE3), "--x0", "1,2")
    assert code == 2 and "--x0" in err


def test_spectrum_three_cycle(tmp_path, capsys):
    code, out, _ = run(capsys, "spectrum", "-i", write(tmp_path, CYCLE3), "--b", "1")
    rep = json.loads(out)
    assert code == 0
    vals = sorted(complex(*e["value"]).imag for e in rep["eigenvalues"])
    assert vals == pytest.approx([-math.sqrt(3) / 6, 0.0, math.sqrt(3) / 6], abs=1e-12)
    assert all(e["in_region"] and e["in_polygon"] for e in rep["eigenvalues"])
    assert all(a["passed"] for a in rep["audits"])


def test_spectrum_band_value(tmp_path, capsys):
    g = {"n": 7, "edges": [[j, i, 0.3 + 0.1 * ((i + j) % 5)] for i in range(1, 8) for j in range(1, 8) if (i * j) % 3 and i != j]}
    code, out, _ = run(capsys, "spectrum", "-i", write(tmp_path, g), "--b", "1")
    rep = json.loads(out)
    assert code == 0 and rep["band_bound"] == pytest.approx(0.3129, abs=1e-4)


def test_spectrum_bad_b(tmp_path, capsys):
    code, _, err = run(capsys, "spectrum", "-i", write(tmp_path, {"n": 2, "edges": [[1, 2, 3]]}), "--b", "1")
    assert code == 2


def test_atlas(tmp_path, capsys):
    code, out, _ = run(capsys, "atlas", "--n", "4", "5", "-o", str(tmp_path), "--count", "11")
    assert code == 0
    rows = list(csv.DictReader((tmp_path / "polygon_n4.csv").open()))
    assert [int(r["k"]) for r in rows] == [0, 1, 2, 3, 2, 1]
    assert complex(float(rows[1]["re"]), float(rows[1]["im"])) == pytest.approx(0.25 + 0.25j, abs=1e-15)
    assert float(rows[3]["re"]) == pytest.approx(1.0) and float(rows[3]["im"]) == pytest.approx(0.0, abs=1e-15)
    cyc = list(csv.DictReader((tmp_path / "cycloid.csv").open()))
    assert len(cyc) == 22
    assert float(cyc[0]["re"]) == 0 and float(cyc[10]["re"]) == pytest.approx(1.0, abs=1e-15)
    assert {r["sign"] for r in cyc} == {"1", "-1"}
    assert (tmp_path / "polygon_n5.csv").exists()


def test_fuzz_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    code, out, _ = run(capsys, "fuzz", "--n", "3", "--count", "10000", "--seed", "7", "-o", str(a))
    rep = json.loads(out)
    assert code == 0 and rep["region_violations"] == 0
    assert rep["max_imag"] <= math.sqrt(3) / 6 + 1e-12
    run(capsys, "fuzz", "--n", "3", "--count", "10000", "--seed", "7", "-o", str(b), "--workers", "3")
    assert a.read_bytes() == b.read_bytes()


def test_human_output(tmp_path, capsys):
    code, out, _ = run(capsys, "analyze", "-i", write(tmp_path, CYCLE2), "--human")
    assert code == 0 and out.startswith("n=2 d=1 rank=1")


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["simulate"])
    assert info.value.code == 2
