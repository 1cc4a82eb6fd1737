import json
import shutil
import subprocess
import sys

import pytest

from flattori.cli import main
from flattori.candidates import candidate_gram
from flattori.lattice import IntGramMatrix


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_entry_point_installed():
    exe = shutil.which("torus")
    cmd = [exe] if exe else [sys.executable, "-m", "flattori.cli"]
    res = subprocess.run(cmd + ["gram", "-k", "1", "-d", "2"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["entries"] == [[8, -4], [-4, 8]]


def test_gram_formats(capsys):
    code, out, _ = run(capsys, "gram", "-k", "3", "--full", "--format", "csv")
    assert code == 0 and out.splitlines()[1].split(",")[0] == "32"
    code, out, _ = run(capsys, "gram", "-k", "5", "-d", "3", "--format", "markdown")
    assert code == 0 and "| 72 | -36 | 0 |" in out


def test_spectrum_and_shortvecs(capsys):
    code, out, _ = run(capsys, "spectrum", "-k", "1", "-d", "8", "--bound", "8")
    levels = json.loads(out)["levels"]
    assert code == 0 and len(levels) == 1 and levels[0]["mult"] == 240
    code, out, _ = run(capsys, "shortvecs", "-k", "3", "-d", "4")
    obj = json.loads(out)
    assert code == 0 and obj["mult"] == 22 and obj["catalog_match"] is True


def test_spectrum_from_file(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(IntGramMatrix.identity(2).to_json()))
    code, out, _ = run(capsys, "spectrum", "--gram", str(path), "--bound", "2", "--format", "csv")
    assert code == 0 and out.splitlines()[1].startswith("1,4,")


def test_table_golden(capsys):
    code, out, err = run(capsys, "table", "--name", "lamkd", "--kmax", "20", "--golden")
    assert code == 0 and "80/80" in err
    code, out, _ = run(capsys, "table", "--name", "lam1", "--format", "markdown")
    assert code == 0 and "59.8381" in out
    code, out, _ = run(capsys, "table", "--name", "cvals", "--k", "3", "--d", "5", "--format", "csv")
    assert code == 0 and ",9/2,13/8," in out  # 6(K-4)/K, 2(K-3)/K at K=16


def test_table_errata_not_fatal(capsys):
    code, _, err = run(capsys, "table", "--name", "eigtable", "--golden")
    assert code == 0 and "2 documented misprints" in err


def test_verify_pass_and_fail(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "-k", "1:6", "-d", "2:4")
    recs = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and len(recs) == 18 and all(r["residual_zero"] for r in recs)
    assert {r["spanning_det"] for r in recs if r["k"] in (5, 6)} == {"9"}
    rows = [list(r) for r in candidate_gram(5, 3).gram.entries]
    rows[1][2] = rows[2][1] = -rows[1][2]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(IntGramMatrix(rows).to_json()))
    code, out, _ = run(capsys, "verify", "-k", "5", "-d", "3", "--gram", str(path))
    assert code == 2 and json.loads(out)["catalog_match"] is False


def test_optimize(capsys, tmp_path):
    code, out, _ = run(capsys, "optimize", "-d", "2", "-k", "1", "--starts", "5", "--seed", "7",
                       "--trace-dir", str(tmp_path))
    obj = json.loads(out)
    assert code == 0 and obj["best_lambda"] == pytest.approx(45.5858, abs=1e-4)
    lines = (tmp_path / "run_000.jsonl").read_text().splitlines()
    assert "best" not in lines[-1] and json.loads(lines[-1])["gram"]["dim"] == 2
    code, out, _ = run(capsys, "optimize", "-d", "2", "-k", "1", "--max-iter", "0")
    assert code == 0 and json.loads(out)["runs"][0]["iterations"] == 0


def test_scaling_commands(capsys):
    code, out, _ = run(capsys, "degeneracy", "-d", "3", "--kmax", "1000")
    obj = json.loads(out)
    assert code == 0 and len(obj["fitted_exponents"]) == 3
    code, out, _ = run(capsys, "injectivity", "-d", "3", "--kmax", "1000", "--format", "csv")
    assert code == 0 and out.startswith("k,inj_proxy,inj_exact")


def test_output_file(capsys, tmp_path):
    path = tmp_path / "o.csv"
    code, out, _ = run(capsys, "table", "--name", "lam1", "--format", "csv", "--out", str(path))
    assert code == 0 and out == "" and path.read_text().startswith("d,lattice")


@pytest.mark.parametrize("argv", [
    ["nosuch"],
    ["gram", "-k", "1", "-d", "9"],
    ["gram", "-k", "0", "-d", "2"],
    ["verify", "-k", "5:1"],
    ["verify", "-d", "1:9"],
    ["table", "--name", "lamkd", "--format", "xml"],
    ["spectrum", "-k", "2"],
    ["gram", "-k", "2"],
])
def test_bad_flags_exit_4(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 4


def test_resource_cap_exit_3(capsys):
    code, _, err = run(capsys, "spectrum", "-k", "1", "-d", "8", "--bound", "100000")
    assert code == 3 and "cap" in err
