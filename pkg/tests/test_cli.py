import csv
import json
import subprocess
import sys

import pytest

from curvecx.cli import main
from curvecx.triangulation import Triangulation


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_surface_info(capsys):
    code, out = run(capsys, "surface-info", "--surface", "N3,1")
    data = json.loads(out)
    assert code == 0
    assert data["euler_char"] == -2 and data["maximal_simplex_range"] == [2, 3] and data["pants_count"] == 2


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["surface-info", "--surface", "N3,1", "--nope"])
    assert exc.value.code == 2
    assert main(["surface-info"]) == 2
    assert main(["surface-info", "--surface", "X1"]) == 2
    assert main(["curves", "classify", "--surface", "N1,3"]) == 2
    capsys.readouterr()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "curvecx.cli", "audit", "--suite", "nope"],
                         capture_output=True, text=True)
    assert res.returncode == 2 and "usage" in res.stderr


def test_tri_commands(capsys, tmp_path):
    path = tmp_path / "t.json"
    assert main(["tri", "build", "--surface", "N1,3", "--out", str(path)]) == 0
    T = Triangulation.from_json(json.loads(path.read_text()))
    code, out = run(capsys, "tri", "validate", "--file", str(path))
    assert code == 0 and json.loads(out)["punctures"] == 3
    code, out = run(capsys, "tri", "flip", "--file", str(path), "--edge", "0")
    assert code == 0 and Triangulation.from_json(json.loads(out)).t == T.t
    code, out = run(capsys, "tri", "bfs", "--surface", "N1,2", "--radius", "3")
    assert len(json.loads(out)["nodes"]) == 2
    code, out = run(capsys, "tri", "path", "--surface", "N1,3", "--len", "5", "--seed", "4")
    assert code == 0 and json.loads(out)["found"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"t": 1, "gluing": [[0, 0, "antiparallel"], [1, 2, "antiparallel"]]}))
    code, out = run(capsys, "tri", "validate", "--file", str(bad))
    assert code == 1 and not json.loads(out)["valid"]


def test_curves_commands(capsys, tmp_path):
    csv_path = tmp_path / "c.csv"
    code, out = run(capsys, "curves", "enumerate", "--surface", "N1,3", "--bound", "4", "--csv", str(csv_path))
    data = json.loads(out)
    assert code == 0 and data["count"] == 38
    rows = list(csv.DictReader(csv_path.open()))
    assert len(rows) == 38 and {r["kind"] for r in rows} == {"OneSided", "Separating"}
    w1, w2 = (",".join(map(str, c["weights"])) for c in data["curves"][:2])
    code, out = run(capsys, "curves", "classify", "--surface", "N1,3", "--weights", w1)
    assert json.loads(out)["curve"]["weights"] == data["curves"][0]["weights"]
    code, out = run(capsys, "curves", "cut", "--surface", "N1,3", "--weights", w1)
    assert code == 0 and json.loads(out)["pieces"]
    code, out = run(capsys, "curves", "disjoint", "--surface", "N1,3", "--weights", w1, "--weights2", w2)
    assert isinstance(json.loads(out)["disjoint"], bool)
    code, out = run(capsys, "curves", "transport", "--surface", "N1,3", "--weights", w1, "--edge", "0")
    assert code == 0 and len(json.loads(out)["weights"]) == 6
    assert main(["curves", "classify", "--surface", "N1,3", "--weights", "1,2"]) == 2
    capsys.readouterr()


def test_complex_commands(capsys):
    code, out = run(capsys, "complex", "build", "--surface", "N1,2", "--bound", "6")
    assert code == 0 and len(json.loads(out)["vertices"]) == 2
    code, out = run(capsys, "complex", "cliques", "--surface", "N1,3", "--bound", "4")
    assert max(c["dimension"] for c in json.loads(out)["cliques"]) == 1
    code, out = run(capsys, "complex", "duallink", "--surface", "N1,3", "--bound", "4", "--vertex", "0")
    assert code == 0 and "components" in json.loads(out)
    code, out = run(capsys, "complex", "pentagon", "--surface", "N1,3", "--bound", "4", "--ids", "0,1,2,3,4")
    assert json.loads(out)["pentagon"] in (True, False)
    code, out = run(capsys, "complex", "simple-pair", "--surface", "N1,5", "--bound", "3")
    data = json.loads(out)
    assert code == 0 and data["found"] and all(data["conditions"].values())
    code, out = run(capsys, "complex", "chain", "--surface", "N1,5")
    assert json.loads(out)["chain"]
    code, out = run(capsys, "complex", "good-triangles", "--surface", "N1,5")
    assert code == 0


def test_audit_exit_codes_and_determinism(capsys):
    args = ["audit", "--suite", "flips", "--surface", "N1,3", "--walks", "20", "--len", "6", "--seed", "7"]
    code1, out1 = run(capsys, *args)
    code2, out2 = run(capsys, *args)
    assert code1 == 0 and out1 == out2
    report = json.loads(out1)
    assert report["config"]["seed"] == 7 and report["summary"]["failed"] == 0
    assert all(c["provenance"] in ("PAPER", "TRIVIAL", "DERIVED") for c in report["checks"])
    code, out = run(capsys, "audit", "--suite", "small-surfaces")
    assert code == 0
    code, out = run(capsys, "audit", "--suite", "eq1", "--surface", "N3,1", "--bound", "3")
    assert code == 0
    code, out = run(capsys, "audit", "--suite", "dims", "--surface", "N1,4", "--bound", "4")
    assert code == 0


def test_failing_audit_exits_one(capsys):
    # bounded dual links of curves at the weight bound can be disconnected;
    # the report says so instead of hiding it
    code, out = run(capsys, "audit", "--suite", "duallink", "--surface", "N1,3", "--bound", "4")
    report = json.loads(out)
    assert code == (0 if report["summary"]["failed"] == 0 else 1)
