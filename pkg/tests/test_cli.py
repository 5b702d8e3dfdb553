import csv
import io
import json
import subprocess
import sys

import pytest

from kerrgrav import cli
from kerrgrav.errors import ConvergenceError
from kerrgrav.runner import CSV_COLUMNS


def write_config(tmp_path, raw):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(raw))
    return str(path)


SMALL_QFI = {"probe": {"photon_number": 2.0, "omega_rad_per_s": 1.0, "chi_rad_per_s": 0.1}}
SMALL_SWEEP = {"sweep": {"log10_N_min": 10, "log10_N_max": 11, "points_per_decade": 2, "chi_rad_per_s": [0.0, 0.1]}}


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_qfi_json(tmp_path, capsys):
    code, out, _ = run(["qfi", "--config", write_config(tmp_path, SMALL_QFI), "--format", "json"], capsys)
    assert code == 0
    rec = json.loads(out)[0]
    assert rec["qfi_analytic"] == pytest.approx(4 * 2 * ((1 + 2 * 3 * 0.1) ** 2 + 2 * 2 * 0.01))
    assert rec["relative_difference"] < 1e-6


def test_qfi_default_too_large(capsys):
    code, _, err = run(["qfi"], capsys)
    assert code == 2
    assert "Fock oracle" in err


def test_qfi_non_convergence(tmp_path, capsys, monkeypatch):
    def fail(*args, **kwargs):
        raise ConvergenceError("estimates disagree", (1.0, 2.0))

    monkeypatch.setattr(cli, "numeric_qfi", fail)
    code, _, err = run(["qfi", "--config", write_config(tmp_path, SMALL_QFI)], capsys)
    assert code == 3
    assert "disagree" in err


def test_bound_csv(capsys):
    code, out, _ = run(["bound"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["method"] for r in rows] == ["fisher", "quadrature", "sql", "squeezed_lossy"]
    fisher, quad = (float(r["relative_error"]) for r in rows[:2])
    assert quad >= fisher


def test_bound_monomial(tmp_path, capsys):
    cfg = write_config(tmp_path, {"probe": {"variant": "monomial", "q": 3}})
    code, out, _ = run(["bound", "--config", cfg, "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)[0]["method"] == "fisher_q"


def test_sweep_to_file(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    code, out, _ = run(["sweep", "--config", write_config(tmp_path, SMALL_SWEEP), "--out", str(out_path), "--workers", "2"], capsys)
    assert code == 0 and out == ""
    lines = out_path.read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + 2 * 3


def test_sweep_json(tmp_path, capsys):
    code, out, _ = run(["sweep", "--config", write_config(tmp_path, SMALL_SWEEP), "--format", "json"], capsys)
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 6 and set(rows[0]) == set(CSV_COLUMNS)


def test_mc(capsys):
    code, out, _ = run(["mc", "--trials", "2000", "--seed", "5", "--format", "json"], capsys)
    assert code == 0
    rec = json.loads(out)[0]
    assert rec["trials"] == 2000 and rec["seed"] == 5
    assert rec["std_ratio"] == pytest.approx(1.0, abs=0.1)


def test_feasibility(capsys):
    code, out, _ = run(["feasibility", "--format", "json"], capsys)
    assert code == 0
    rec = json.loads(out)[0]
    assert rec["peak_power_W"] == pytest.approx(3.515e13, rel=1e-3)
    assert rec["chi_from_phase_min"] < 1 < 6 < rec["chi_from_phase_max"]


def test_unknown_key_exit_code(tmp_path, capsys):
    code, _, err = run(["bound", "--config", write_config(tmp_path, {"probe": {"omega": 1.0}})], capsys)
    assert code == 2
    assert "unknown keys" in err


def test_quadrature_suppressed_past_validity(tmp_path, capsys):
    cfg = write_config(tmp_path, {"probe": {"photon_number": 1e22, "chi_rad_per_s": 6.0}})
    code, out, _ = run(["bound", "--config", cfg], capsys)
    assert code == 0
    rows = {r["method"]: r for r in csv.DictReader(io.StringIO(out))}
    assert rows["quadrature"]["relative_error"] == ""
    assert rows["quadrature"]["valid_flag"] == "false"
    assert float(rows["fisher"]["relative_error"]) > 0


def test_invalid_geometry_exit_code(tmp_path, capsys):
    cfg = write_config(tmp_path, {"geometry": {"r_s_m": 7e6}})
    code, _, err = run(["bound", "--config", cfg], capsys)
    assert code == 2
    assert err.startswith("error:")


def test_unwritable_out(tmp_path, capsys):
    code, _, _ = run(["bound", "--out", str(tmp_path / "no" / "such.csv")], capsys)
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kerrgrav", "bound", "--format", "json"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)[0]["method"] == "fisher"
