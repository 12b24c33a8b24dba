import csv
import io
import json
import subprocess
import sys

import pytest

from fracsobolev import cli
from fracsobolev.defining import ConvergenceError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_spectrum_table(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "2", "--gamma", "0.5", "--L", "16")
    table = rows(out)
    assert code == 0 and len(table) == 17
    assert float(table[0]["mu_l"]) == 0.5
    assert float(table[3]["mu_l"]) == pytest.approx(3.5)


def test_spectrum_json(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "4", "--gamma", "1.5", "--L", "3", "--out", "json")
    assert code == 0
    assert len(json.loads(out)) == 4


def test_onofri_witness_exits_zero(capsys):
    code, out, _ = run(capsys, "onofri", "--omega", "conformal:n=2:a=0.4")
    assert code == 0
    assert abs(float(rows(out)[0]["deficit"])) < 1e-10


def test_sobolev_command(capsys):
    code, out, _ = run(capsys, "sobolev", "--n", "3", "--gamma", "0.7", "--f", "zonal:1+0.2cos")
    assert code == 0 and float(rows(out)[0]["deficit"]) > 0


def test_continuation_rows(capsys):
    code, out, _ = run(capsys, "continuation", "--n", "2", "--omega", "zonal:0.3cos",
                       "--gammas", "0.5:0.999:6:geometric")
    table = rows(out)
    assert code == 0 and len(table) == 6
    assert list(table[0]) == ["gamma", "A", "B", "targetA", "targetB", "gap"]
    assert all(float(r["A"]) <= float(r["B"]) for r in table)


def test_defining_json(capsys):
    code, out, _ = run(capsys, "defining", "--n", "4", "--s", "3.6", "--out", "json")
    doc = json.loads(out)
    assert code == 0 and doc["bounds"]["violations"] == []


@pytest.mark.parametrize("argv", [
    ["spectrum", "--n", "2", "--gamma", "1.5", "--L", "4"],
    ["spectrum", "--n", "2", "--gamma", "0.5"],
    ["onofri", "--omega", "banana:1"],
    ["continuation", "--n", "2", "--omega", "zonal:cos", "--gammas", "0.9,0.8"],
    ["spectrum", "--n", "2", "--gamma", "0.5", "--L", "4", "--tol", "-1"],
    ["nosuchcommand"],
])
def test_configuration_errors_exit_two(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_nonconvergence_exits_three(capsys, monkeypatch):
    def boom(*a, **k):
        raise ConvergenceError("stalled")
    monkeypatch.setattr(cli, "solve_adapted", boom)
    code, _, err = run(capsys, "defining", "--n", "4", "--s", "3.6")
    assert code == 3 and "stalled" in err


def test_flags_override_config(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 2, "gamma": 0.5, "L": 3}))
    _, out, _ = run(capsys, "spectrum", "--config", str(cfg))
    assert len(rows(out)) == 4
    _, out, _ = run(capsys, "spectrum", "--config", str(cfg), "--L", "5")
    assert len(rows(out)) == 6


def test_unknown_config_key(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "spectrum", "--config", str(cfg))[0] == 2


def test_output_file_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        run(capsys, "sobolev", "--n", "2", "--gamma", "0.4", "--f", "conformal:n=2:a=0.3",
            "--output", str(p))
    assert a.read_text() == b.read_text() != ""


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify-all", "--only", "1,2")
    assert code == 0 and all(r["passed"] == "true" for r in rows(out))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fracsobolev", "spectrum", "--n", "2",
                           "--gamma", "0.5", "--L", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("l,mu_l")
