import json
import subprocess
import sys
from pathlib import Path

import pytest

from stackcount import __version__
from stackcount.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_alpha(capsys):
    code, out, _ = run(capsys, "alpha", "--n", "3", "--fields", "2,3,4,5")
    rep = json.loads(out)
    assert code == 0
    assert rep["version"] == __version__
    assert rep["config"]["command"] == "alpha"
    assert rep["result"]["polynomial"] == "q^2 + q - 1"
    code, out, _ = run(capsys, "alpha", "--n", "1", "--fields", "2,3")
    assert code == 0 and json.loads(out)["result"]["polynomial"] == "1"


def test_alpha_eval_only(capsys):
    code, out, _ = run(capsys, "alpha", "--n", "4", "--fields", "2,3", "--eval-only")
    raw = json.loads(out)["result"]["raw"]
    assert code == 0
    assert raw == {"2": "16", "3": "57"}  # 2q^3 + q^2 - 2q


def test_hseries_numeric_and_symbolic(capsys):
    q = str(DATA / "a2.q")
    code, out, _ = run(capsys, "hseries", "--quiver", q, "--d", "1,1", "--base-q", "2")
    rep = json.loads(out)["result"]
    assert code == 0 and rep["mode"] == "numeric"
    coeff = {tuple(c["d"]): c["value"] for c in rep["coefficients"]}
    assert coeff[(1, 1)]["entries"] == ["2"]
    code, out, _ = run(capsys, "hseries", "--quiver", q, "--d", "1,1", "--fields", "2,3,4,5")
    rep = json.loads(out)["result"]
    assert rep["mode"] == "symbolic"


def test_extract_ai(capsys):
    q = str(DATA / "a2.q")
    code, out, _ = run(capsys, "extract-ai", "--quiver", q, "--d", "1,1", "--fields", "2,3,4,5")
    assert code == 0
    rep = json.loads(out)["result"]
    assert rep["coefficients"]


@pytest.mark.parametrize("argv", [
    ["verify", "--identity", "feit-fine", "--nmax", "3", "--fields", "2,3"],
    ["verify", "--identity", "gauss", "--nmax", "4"],
    ["verify", "--identity", "qbinomial", "--nmax", "4", "--k", "2"],
    ["verify", "--identity", "vector-spaces", "--nmax", "4"],
    ["verify", "--identity", "main-theorem", "--quiver", str(DATA / "trivial.q"), "--dmax", "2",
     "--fields", "2,3,4"],
])
def test_verify_ok(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0, out
    assert json.loads(out)["result"]["ok"] is True


def test_kac(capsys):
    code, out, _ = run(capsys, "kac", "--quiver", str(DATA / "kronecker.q"), "--bound", "4")
    terms = {tuple(t["d"]): t["polynomial"] for t in json.loads(out)["result"]["coefficients"]}
    assert code == 0 and terms[(1, 1)] == "q + 1"


def test_exit_codes(capsys, tmp_path):
    code, _, err = run(capsys, "kac", "--quiver", str(tmp_path / "missing.q"), "--bound", "2")
    assert code == 2 and "error" in err
    bad = tmp_path / "bad.q"
    bad.write_text("vertices 2\n1 5\n")
    assert run(capsys, "kac", "--quiver", str(bad), "--bound", "2")[0] == 2
    cyc = tmp_path / "cyc.q"
    cyc.write_text("vertices 2\n1 2\n2 1\n")
    assert run(capsys, "hseries", "--quiver", str(cyc), "--d", "1,1", "--base-q", "2")[0] == 2
    assert run(capsys, "hseries", "--quiver", str(DATA / "a2.q"), "--d", "1", "--base-q", "2")[0] == 2
    code, out, _ = run(capsys, "alpha", "--n", "6", "--fields", "2", "--eval-only", "--budget", "100")
    assert code == 3 and json.loads(out)["result"]["error"] == "budget"
    with pytest.raises(SystemExit) as exc:
        main(["alpha"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_deterministic_output(tmp_path):
    outs = []
    for t in ("1", "4"):
        path = tmp_path / "report.json"
        subprocess.run([sys.executable, "-m", "stackcount.cli", "hseries", "--quiver",
                        str(DATA / "a2.q"), "--d", "1,1", "--base-q", "2", "--threads", t,
                        "--out", str(path)], check=True)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_pretty(capsys):
    code, out, _ = run(capsys, "alpha", "--n", "2", "--fields", "2,3,4", "--pretty")
    assert code == 0 and "polynomial: q" in out
