import csv
import json
import math
import subprocess
import sys

import pytest

from gallab import gen_squares, pair_correlation
from gallab import experiments
from gallab.cli import main, parse_config_text, rows_to_csv
from gallab.errors import InvalidArgument, ProductOverflowError
from gallab.experiments import fit_slope, ratio_lemma_sweep


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_fit_slope_examples():
    assert fit_slope([(x, x**2) for x in (1, 2, 4, 8)]) == pytest.approx(2.0, abs=1e-12)
    assert fit_slope([(x, 5.0) for x in (1, 2, 4, 8)]) == pytest.approx(0.0, abs=1e-12)
    slope = fit_slope([(x, 7 * x**6 * math.log(x)) for x in (16, 32, 64, 128, 256)])
    assert 6.0 <= slope <= 6.3
    with pytest.raises(InvalidArgument):
        fit_slope([(1, 1), (2, 2)])
    with pytest.raises(InvalidArgument):
        fit_slope([(1, 1), (2, 0), (3, 1)])


def test_config_text_parsing():
    pairs = parse_config_text("# comment\nset = squares(100)\n\nalpha=0.123  # trailing\nz-sizes = 1,2\n")
    assert pairs == [("set", "squares(100)"), ("alpha", "0.123"), ("z_sizes", "1,2")]


def test_paircorr_pass_through(tmp_path):
    cfg = tmp_path / "pc.cfg"
    cfg.write_text("set = squares(100)\nalpha = 0.5\ns = 1\n")
    out = tmp_path / "pc.csv"
    # command line wins over the file
    assert main(["paircorr", "--config", str(cfg), "--alpha", "0.123", "--output", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 1
    assert float(rows[0]["F"]) == pair_correlation(gen_squares(100), 0.123, 1.0).F
    meta = json.loads((tmp_path / "pc.json").read_text())
    assert meta["config"]["alpha"] == "0.123" and meta["version"] == rows[0]["version"]
    assert "timestamp" in meta and len(meta["wall_time_ms"]) == 1


def test_malformed_key_exits_1_without_output(tmp_path, capsys):
    out = tmp_path / "x.csv"
    assert main(["paircorr", "--bogus", "1", "--output", str(out)]) == 1
    assert not out.exists()
    assert "bogus" in capsys.readouterr().err
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("no equals sign here\n")
    assert main(["paircorr", "--config", str(cfg), "--output", str(out)]) == 1
    assert main(["paircorr", "--s", "abc", "--output", str(out)]) == 1
    assert main(["nonsense"]) == 1
    assert not out.exists()


def test_missing_config_file(tmp_path):
    assert main(["moments", "--config", str(tmp_path / "nope.cfg")]) == 1


def test_mult_energy_scaling_rows_and_slope(tmp_path):
    out = tmp_path / "me.csv"
    assert main(["mult-energy-scaling", "--sizes", "16,32,64,128,256", "--output", str(out)]) == 0
    rows = read_csv(out)
    assert [int(r["N"]) for r in rows] == [16, 32, 64, 128, 256]
    meta = json.loads((tmp_path / "me.json").read_text())
    recomputed = fit_slope((int(r["N"]), int(r["mult_energy"])) for r in rows)
    assert meta["summary"]["slope_mult_energy"] == pytest.approx(recomputed, rel=1e-12)


def test_set_from_file(tmp_path):
    sf = tmp_path / "A.txt"
    sf.write_text("1\n2\n3\n3\n")
    out = tmp_path / "o.csv"
    assert main(["paircorr", "--set", f"file({sf})", "--alpha", "0.25,0.5", "--s", "0.2", "--output", str(out)]) == 0
    assert [r["N"] for r in read_csv(out)] == ["3", "3"]
    sf.write_text("1\nfoo\n")
    assert main(["paircorr", "--set", f"file({sf})", "--output", str(out)]) == 1


def test_oracle_failure_exits_2(tmp_path, monkeypatch, capsys):
    from gallab.randmult import IdentityCheck
    from gallab.stats import MomentEstimate

    monkeypatch.setattr(experiments, "identity_check",
                        lambda *a, **k: IdentityCheck(MomentEstimate(10.0, 0.1, 100), 1.0))
    out = tmp_path / "ic.csv"
    assert main(["identity-check", "--samples", "100", "--alpha", "0.75", "--output", str(out)]) == 2
    assert "row 1" in capsys.readouterr().err


def test_overflow_exits_2(tmp_path, monkeypatch):
    def boom(*a, **k):
        raise ProductOverflowError("product key exceeds the signed 128-bit range")

    monkeypatch.setattr(experiments, "mult_energy_of_r", boom)
    assert main(["mult-energy-scaling", "--output", str(tmp_path / "m.csv")]) == 2


def test_csv_quoting_and_floats():
    text = rows_to_csv([{"a": 0.1, "b": "x,y"}, {"a": 1e-300, "c": 3}])
    lines = text.split("\r\n")
    assert lines[0] == "a,b,c"
    assert lines[1] == '0.1,"x,y",'
    assert float(lines[2].split(",")[0]) == 1e-300


@pytest.mark.parametrize("experiment, extra", [
    ("gcdsum-scaling", ["--sizes", "8,16,32", "--verify", "true"]),
    ("ratio-lemma", ["--sizes", "8,16", "--z-sizes", "1,4", "--trials", "1"]),
    ("moments", ["--alpha", "0.75", "--l", "1,2", "--T", "50", "--samples", "500"]),
    ("variance-panel", ["--sizes", "50,100", "--samples", "200"]),
    ("identity-check", ["--f", "rep(random(100,6,1))", "--alpha", "1", "--T", "100", "--samples", "2000"]),
])
def test_every_experiment_runs_and_is_deterministic(tmp_path, experiment, extra):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main([experiment, *extra, "--seed", "5", "--output", str(a)]) == 0
    assert main([experiment, *extra, "--seed", "5", "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rows = read_csv(a)
    assert rows and all(r["seed"] == "5" for r in rows)
    if experiment in ("moments", "variance-panel", "identity-check"):
        assert all(r["std_error"] != "" for r in rows)


def test_ratio_sweep_constant_positive():
    rows = ratio_lemma_sweep([8, 16], [1, 4], 2, 2, seed=1)
    assert len(rows) == 8 and all(r["constant"] >= 0 for r in rows)


def test_module_entry_point(tmp_path):
    out = tmp_path / "pc.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "gallab.cli", "paircorr", "--set", "interval(10)", "--alpha", "0.3", "--output", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()
