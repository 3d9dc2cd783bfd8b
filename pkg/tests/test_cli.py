import json
import subprocess
import sys

import pytest

from mwtree.cli import main
from mwtree.io import example_path


@pytest.fixture
def t1_path():
    return example_path("t1")


@pytest.fixture
def t2_path():
    return example_path("t2")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_det_t1(capsys, t1_path):
    code, out, _ = run(capsys, "det", t1_path)
    assert code == 0
    assert "NoDeg2" in out
    assert "+1.02400000000e+05" in out and "(= 102400)" in out
    assert "(-1)^6 * 2^6 * 1 * 16 * 100" in out


def test_det_json(capsys, t2_path):
    code, out, _ = run(capsys, "det", t2_path, "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["branch"] == "OneDeg2" and doc["exact"] == 9437184
    assert [f["label"] for f in doc["factors"]] == ["(-1)^8", "2^10", "36", "256", "1"]


def test_verify_t2_reports_skipped(capsys, t2_path):
    code, out, _ = run(capsys, "verify", t2_path)
    assert code == 0
    assert out.count("Skipped") == 3
    assert "FAILED" not in out


def test_verify_json_records(capsys, t1_path):
    code, out, _ = run(capsys, "verify", t1_path, "--json")
    recs = json.loads(out)
    assert code == 0
    assert all({"identity", "ratio", "status", "regime"} <= set(r) for r in recs)
    assert all(r["status"] == "pass" for r in recs)


def test_inv_check(capsys, t1_path):
    code, out, _ = run(capsys, "inv", t1_path, "--check", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["check"]["status"] == "pass"
    assert doc["check"]["identity_residual"] < 1e-9
    assert len(doc["delta_inv"]) == 8


def test_inv_with_degree_two_vertex(capsys, t2_path):
    code, _, err = run(capsys, "inv", t2_path)
    assert code == 1 and "degree 2" in err


@pytest.mark.parametrize("which,shape", [
    ("D", [8, 8]), ("delta", [8, 8]), ("L", [8, 8]), ("Q", [8, 6]), ("H", [6, 6]), ("F", [6, 6]),
    ("beta", [2, 2]), ("eta", [8, 2]),
])
def test_dump(capsys, t1_path, which, shape):
    code, out, _ = run(capsys, "dump", t1_path, "--matrix", which, "--json")
    assert code == 0 and json.loads(out)["shape"] == shape


def test_dump_human_has_no_negative_zero(capsys, t1_path):
    _, out, _ = run(capsys, "dump", t1_path, "--matrix", "H")
    assert "-0." not in out


def test_fuzz_json_is_byte_identical(capsys):
    argv = ["fuzz", "--trials", "5", "--n", "3:6", "--s", "1:2", "--mode", "diagonal", "--seed", "7", "--json"]
    c1, first, _ = run(capsys, *argv)
    c2, second, _ = run(capsys, *argv)
    assert c1 == c2 == 0
    assert first == second
    assert json.loads(first)["config"]["seed"] == 7


def test_fuzz_human_table(capsys):
    code, out, _ = run(capsys, "fuzz", "--trials", "6", "--mode", "general", "--s", "2:3")
    assert code == 0
    assert "not asserted" in out


def test_example_subcommand(capsys):
    code, out, _ = run(capsys, "example", "t1")
    assert code == 0 and json.loads(out)["n"] == 4


@pytest.mark.parametrize("argv", [
    [],
    ["det"],
    ["dump", "x.json", "--matrix", "Z"],
    ["fuzz", "--n", "5:3"],
    ["fuzz", "--n", "abc"],
    ["fuzz", "--trials", "0"],
    ["example", "t9"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2


def test_missing_and_malformed_files_exit_2(capsys, tmp_path):
    assert main(["det", str(tmp_path / "nope.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "s": 2, "edges": [{"u": 1, "v": 2, "w": [[1, 0, 0], [0, 1, 0]]}]}')
    assert main(["det", str(bad)]) == 2
    assert "shape" in capsys.readouterr().err
    cyc = tmp_path / "cyc.json"
    cyc.write_text('{"n": 4, "s": 1, "edges": [{"u": 1, "v": 2, "w": [[1]]}, {"u": 3, "v": 4, "w": [[1]]},'
                   ' {"u": 4, "v": 3, "w": [[1]]}]}')
    assert main(["verify", str(cyc)]) == 2


def test_module_entry_point(t1_path):
    out = subprocess.run([sys.executable, "-m", "mwtree", "det", t1_path, "--json"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["exact"] == 102400


def test_check_failure_exits_1(capsys, monkeypatch, t1_path):
    from mwtree import verify

    monkeypatch.setitem(verify.DEFAULT_TOLERANCES, "laplacian_distance", -1.0)
    code, out, _ = run(capsys, "verify", t1_path)
    assert code == 1 and "FAILED" in out
    assert main(["fuzz", "--trials", "2"]) == 1
