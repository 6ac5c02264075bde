import json
import math
import subprocess
import sys

import pytest

from mink.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


def test_illum_solve_hexagon(capsys):
    code, out, _ = call(capsys, "illum", "solve", "--body", "hexagon")
    data = json.loads(out)
    assert code == 0 and data["L"] == 3 and data["B"] == pytest.approx(6.0)
    assert data["partitionsExamined"] == 203


def test_illum_round_trip(capsys, tmp_path):
    _, out, _ = call(capsys, "illum", "solve", "--body", "cube", "--dim", "3")
    path = write(tmp_path, "solve.json", out)
    code, out, _ = call(capsys, "illum", "check", "--body", "cube", "--dim", "3",
                        "--lights", path)
    assert code == 0 and json.loads(out) == {"illuminates": True, "unlit": [],
                                             "unlitVertices": []}


def test_illum_check_unlit(capsys, tmp_path):
    path = write(tmp_path, "l.json", {"dim": 2, "lights": [[2, 2]]})
    _, out, _ = call(capsys, "illum", "check", "--body", "square", "--lights", path)
    data = json.loads(out)
    assert not data["illuminates"] and len(data["unlit"]) == 3


def test_body_from_file(capsys, tmp_path):
    path = write(tmp_path, "k.json", {"dim": 2, "normals": [[1, 0], [-1, 0], [0, 1], [0, -1]]})
    _, out, _ = call(capsys, "illum", "solve", "--body", path)
    assert json.loads(out)["B"] == pytest.approx(4.0)


def test_cover_commands_round_trip(capsys, tmp_path):
    _, out, _ = call(capsys, "cover", "cube-halfcover", "--dim", "3")
    cert = write(tmp_path, "c.json", out)
    assert json.loads(call(capsys, "cover", "cost", "--cert", cert)[1]) == {"cost": 16.0}
    verified = json.loads(call(capsys, "cover", "verify", "--cert", cert)[1])
    assert verified["verdict"] == "covered"
    code, out, _ = call(capsys, "cover", "to-lights", "--cert", cert, "--eps", "1e-3",
                        "--verify")
    lights = json.loads(out)
    assert code == 0 and lights["illuminates"] and lights["cost"] <= lights["bound"]
    lp = write(tmp_path, "lights.json", out)
    _, out, _ = call(capsys, "illum", "check", "--body", "cube", "--dim", "3", "--lights", lp)
    assert json.loads(out)["illuminates"]


def test_cover_named_body(capsys, tmp_path):
    cert = write(tmp_path, "c.json", {"body": "cube", "homothets": [
        {"lambda": 0.5, "t": [0.5, 0.5]}, {"lambda": 0.5, "t": [-0.5, 0.5]},
        {"lambda": 0.5, "t": [0.5, -0.5]}]})
    data = json.loads(call(capsys, "cover", "verify", "--cert", cert)[1])
    assert data["verdict"] == "undetermined" and data["witnesses"]


def test_smt_solve_equilateral(capsys, tmp_path):
    pts = write(tmp_path, "p.json", {"dim": 2, "points": [[0, 0], [1, 0],
                                                           [0.5, math.sqrt(3) / 2]]})
    svg = tmp_path / "t.svg"
    code, out, _ = call(capsys, "smt", "solve", "--gauge", "euclidean", "--points", pts,
                        "--svg", str(svg))
    assert code == 0
    assert json.loads(out)["length"] == pytest.approx(math.sqrt(3), abs=1e-6)
    text = svg.read_text()
    assert text.startswith("<svg") and text.count("<line") == 3 and "<circle" in text


def test_smt_points_round_trip(capsys, tmp_path):
    pts = write(tmp_path, "p.json", {"dim": 2, "points": [[0, 0], [1, 0.2], [0.3, 1], [-1, 0.4]]})
    _, first, _ = call(capsys, "smt", "solve", "--gauge", "hexagon", "--points", pts)
    again = write(tmp_path, "tree.json", first)
    _, second, _ = call(capsys, "smt", "solve", "--gauge", "hexagon", "--points", again)
    assert first == second


def test_smt_svg_rejects_3d(capsys, tmp_path):
    pts = write(tmp_path, "p.json", {"dim": 3, "points": [[0, 0, 0], [1, 0, 0], [0, 1, 1]]})
    code, _, err = call(capsys, "smt", "solve", "--gauge", "cube", "--points", pts,
                        "--svg", str(tmp_path / "x.svg"))
    assert code == 2 and "dimension" in err


def test_star_test_and_degrees(capsys, tmp_path):
    U = write(tmp_path, "u.json", {"dim": 2, "points": [[1, 1], [1, -1], [-1, 1], [-1, -1]]})
    data = json.loads(call(capsys, "smt", "star-test", "--body", "cube", "--directions", U)[1])
    assert data["isSMT"] and data["starLength"] == 4.0
    data = json.loads(call(capsys, "smt", "degrees", "--body", "cube", "--trials", "5",
                           "--seed", "2")[1])
    assert data["maxDegree"] <= data["bound"] == 4
    data = json.loads(call(capsys, "smt", "degrees", "--body", "euclidean", "--trials", "5")[1])
    assert data["skipped"]


def test_determinism(capsys):
    a = call(capsys, "smt", "degrees", "--body", "hexagon", "--trials", "4", "--seed", "9")[1]
    b = call(capsys, "smt", "degrees", "--body", "hexagon", "--trials", "4", "--seed", "9")[1]
    assert a == b


@pytest.mark.parametrize("argv,needle", [
    (["illum", "solve", "--body", "nonsense"], "name"),
    (["illum", "solve", "--body", "hexagon", "--dim", "3"], "dimension"),
    (["cover", "cube-halfcover", "--dim", "5"], "dimension"),
])
def test_validation_exit_two(capsys, argv, needle):
    code, out, err = call(capsys, *argv)
    assert code == 2 and out == ""
    assert err.count("\n") == 1 and err.startswith("error: invariant: " + needle)


def test_malformed_json(capsys, tmp_path):
    bad = write(tmp_path, "bad.json", "{nope")
    code, _, err = call(capsys, "cover", "cost", "--cert", bad)
    assert code == 2 and "json" in err


def test_invalid_polytope_file(capsys, tmp_path):
    path = write(tmp_path, "k.json", {"dim": 2, "normals": [[1, 0], [0, 1], [-1, 0]]})
    code, _, err = call(capsys, "illum", "solve", "--body", path)
    assert code == 2 and "centred" in err


def test_cap_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("MINK_MAX_PARTITIONS", "50")
    code, _, err = call(capsys, "illum", "solve", "--body", "hexagon")
    assert code == 2 and err.startswith("error: cap:")


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as e:
        run(["illum", "solve", "--body", "cube", "--frobnicate"])
    assert e.value.code == 2


def test_console_script_help():
    res = subprocess.run([sys.executable, "-m", "mink.cli", "cover", "to-lights", "--help"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "1e-06" in res.stdout


def test_table_reproduce(capsys):
    code, out, _ = call(capsys, "table", "reproduce")
    data = json.loads(out)
    assert code == 0 and data["allMatch"]
    kinds = {(r["kind"], r["body"]) for r in data["rows"]}
    assert ("s", "hexagon") in kinds and ("v", "hexagon") in kinds
    assert ("C", "cube4") in kinds


def test_table_mismatch_exit(capsys, monkeypatch):
    import mink.table as table
    monkeypatch.setattr(table, "reproduce", lambda slow=False: {"rows": [], "allMatch": False})
    code, _, _ = call(capsys, "table", "reproduce")
    assert code == 1


@pytest.mark.slow
def test_table_reproduce_slow(capsys):
    code, out, _ = call(capsys, "table", "reproduce", "--slow")
    data = json.loads(out)
    assert code == 0 and data["allMatch"]
    assert {("s", "cube3"), ("v", "cube3")} <= {(r["kind"], r["body"]) for r in data["rows"]}
