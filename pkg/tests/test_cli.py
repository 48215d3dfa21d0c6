import csv
import json
import subprocess
import sys

import pytest

from logdiff.cli import EXIT_CONFIG, EXIT_OK, RECORD_FIELDS, main
from logdiff.config import ConfigError, InitialData, parse_config


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def _summary(out):
    return json.loads((out / "summary.json").read_text())


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


# configuration parsing

def test_parse_config_examples():
    cfg = parse_config("N = 3  # dimension\nk1 = 4\nk2 = 1\nT = 1\n", "theorem1")
    assert (cfg.N, cfg.k1, cfg.k2, cfg.T, cfg.frame) == (3, 4.0, 1.0, 1.0, "selfsimilar")
    cfg = parse_config("N = 3\nT = 1\ninitial = mean-of-barenblatts(1, 4, 0.5)\n", "match-k0")
    assert cfg.initial == InitialData("mean-of-barenblatts", (1.0, 4.0, 0.5))
    assert cfg.grid_params() == (1000.0, 4000, 1.002)


@pytest.mark.parametrize("text, command, needle", [
    ("N = 3\nk = 1\nfoo = 2\n", "simulate", "foo"),
    ("N = 3\nk = 1\nk = 2\n", "simulate", "duplicate"),
    ("N = 3\nk1 = 1\nk2 = 1\n", "theorem1", "k1"),
    ("N = 5\nk1 = 4\nk2 = 1\n", "theorem1", "N"),
    ("N = 4\nk1 = 2\nk2 = 1\nk0 = 1\n", "theorem2", "cover N=3 or N>=5 only"),
    ("N = 3\nk = 1\nframe = sideways\n", "simulate", "frame"),
])
def test_parse_config_rejects(text, command, needle):
    with pytest.raises(ConfigError, match=needle):
        parse_config(text, command)


def test_initial_data_parse_errors():
    with pytest.raises(ConfigError):
        InitialData.parse("gaussian(1)")
    with pytest.raises(ConfigError):
        InitialData.parse("barenblatt(1, 2)")


# commands end to end

def test_bad_config_exit_code(tmp_path):
    cfg = _write(tmp_path, "bad.cfg", "N = 3\nnonsense = 1\n")
    assert main(["simulate", "--config", cfg, "--out", str(tmp_path / "o")]) == EXIT_CONFIG


def test_match_k0_command(tmp_path):
    cfg = _write(tmp_path, "mk.cfg", "N = 3\nT = 1\ninitial = mean-of-barenblatts(1, 4, 0.5)\n")
    out = tmp_path / "mk"
    assert main(["match-k0", "--config", cfg, "--out", str(out)]) == EXIT_OK
    s = _summary(out)
    assert s["k0"] == pytest.approx(2.25, abs=1e-6)
    assert s["schema"] == "logdiff-run/1"
    assert (out / "mass_function.csv").exists() and (out / "mass_function.png").exists()


def test_verify_command(tmp_path):
    cfg = _write(tmp_path, "v.cfg", "N = 5\nk = 1\n")
    out = tmp_path / "v"
    assert main(["verify", "--config", cfg, "--out", str(out), "--seed", "7"]) == EXIT_OK
    checks = json.loads((out / "verify.json").read_text())
    assert {"rescale_identity", "stationarity", "drift_diffusion_identity"} <= set(checks)
    assert all(c["passed"] for c in checks.values())


def test_barenblatt_table_command(tmp_path):
    cfg = _write(tmp_path, "bt.cfg", "N = 3\nk = 1\nT = 1\n")
    out = tmp_path / "bt"
    assert main(["barenblatt-table", "--config", cfg, "--out", str(out)]) == EXIT_OK
    rows = _rows(out / "barenblatt_table.csv")
    assert len(rows) > 1 and float(rows[1][-1]) > 0


SIM = "N = 3\nk = 1\nT = 1\nr_max = 10\nm_nodes = 80\ndt = 0.05\nhorizon = 1\nsnapshots = 0.5\n" \
      "initial = barenblatt-plus-bump(1, 0.1, 1, 2)\n"


def test_simulate_outputs_and_determinism(tmp_path):
    cfg = _write(tmp_path, "sim.cfg", SIM)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", "--config", cfg, "--out", str(a)]) == EXIT_OK
    assert main(["simulate", "--config", cfg, "--out", str(b)]) == EXIT_OK
    assert (a / "diagnostics.csv").read_bytes() == (b / "diagnostics.csv").read_bytes()
    rows = _rows(a / "diagnostics.csv")
    assert rows[0] == list(RECORD_FIELDS)
    s = _summary(a)
    assert len(rows) - 1 == s["steps"] == 20
    # no weight is defined for N = 3
    col = rows[0].index("weighted_l1_dist")
    assert all(r[col] == "" for r in rows[1:])
    assert sorted(p.name for p in (a / "snapshots").glob("*.json"))


def test_batch_with_threads(tmp_path):
    c1 = _write(tmp_path, "one.cfg", SIM)
    c2 = _write(tmp_path, "two.cfg", SIM.replace("0.1, 1, 2", "-0.1, 1, 2"))
    out = tmp_path / "batch"
    assert main(["simulate", "--config", c1, "--config", c2, "--out", str(out), "--threads", "2"]) == EXIT_OK
    assert _summary(out / "one")["passed"] and _summary(out / "two")["passed"]


def test_console_entry_point(tmp_path):
    cfg = _write(tmp_path, "bt.cfg", "N = 3\nk = 1\nT = 1\n")
    proc = subprocess.run([sys.executable, "-m", "logdiff.cli", "barenblatt-table", "--config", cfg,
                           "--out", str(tmp_path / "o")], capture_output=True, text=True)
    assert proc.returncode == 0 and "ok" in proc.stdout
