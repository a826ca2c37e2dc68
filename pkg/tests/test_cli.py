import csv
import io
import json
import math
import subprocess
import sys

import pytest

from srlmp.cli import main
from srlmp.schedule import ReliabilitySchedule
from srlmp.tanner import load_qalist


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_capacity(capsys):
    code, out, _ = run(capsys, "capacity", "--q", "2", "--eps", "0")
    assert code == 0 and float(out) == 1.0
    code, out, _ = run(capsys, "capacity", "--q", "4", "--eps", "0.1,0.75")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["eps", "capacity"] and float(rows[2][1]) == pytest.approx(0.0, abs=1e-12)


def test_capacity_out_of_range(capsys):
    code, _, err = run(capsys, "capacity", "--q", "4", "--eps", "0.9")
    assert code == 2 and "srlmp" in err


def test_shannon_limit(capsys):
    code, out, _ = run(capsys, "shannon-limit", "--q", "2", "--rate", "0.4")
    assert code == 0 and float(out) == pytest.approx(0.1461, abs=1e-4)


def test_de_threshold(capsys):
    code, out, _ = run(capsys, "de", "threshold", "--q", "2", "--gamma", "1", "--dd", "l=3,r=5",
                       "--delta", "1.0", "--resolution", "1e-3")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["q", "gamma", "dd", "delta", "threshold"]
    assert 0.08 < float(rows[1][4]) < 0.11


def test_de_unsupported(capsys):
    code, _, err = run(capsys, "de", "threshold", "--q", "2", "--gamma", "2", "--dd", "l=3,r=5")
    assert code == 3 and "unsupported" in err


def test_de_bad_degree_distribution(capsys):
    code, _, _ = run(capsys, "de", "threshold", "--q", "2", "--dd", "l=3,r=")
    assert code == 2


def test_de_trace_and_schedule(capsys, tmp_path):
    code, out, _ = run(capsys, "de", "trace", "--q", "4", "--dd", "l=3,r=5", "--eps", "0.1")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0][0] == "iteration" and len(rows) > 3
    path = tmp_path / "s.json"
    code, _, _ = run(capsys, "de", "schedule", "--q", "4", "--gamma", "2", "--dd", "l=3,r=5",
                     "--eps", "0.1", "--delta", "1.25", "-o", str(path))
    sched = ReliabilitySchedule.load(path)
    assert code == 0 and sched.gamma == 2
    assert sched.d_ch == pytest.approx(math.log(27))


def test_de_trace_tiny_eps(capsys):
    code, out, _ = run(capsys, "de", "trace", "--q", "2", "--dd", "l=3,r=5", "--eps", "1e-12")
    assert code == 0 and len(out.strip().splitlines()) <= 5


def test_peg_and_simulate(capsys, tmp_path):
    code_path = tmp_path / "c.qalist"
    code, _, _ = run(capsys, "peg", "--n", "100", "--q", "4", "--dd", "l=3,r=5", "--seed", "2",
                     "-o", str(code_path))
    g = load_qalist(code_path)
    assert code == 0 and (g.n, g.m, g.q) == (100, 60, 4)

    sched_path = tmp_path / "s.json"
    run(capsys, "de", "schedule", "--q", "4", "--dd", "l=3,r=5", "--eps", "0.05", "-o", str(sched_path))
    json_path = tmp_path / "r.json"
    code, out, _ = run(capsys, "--threads", "1", "simulate", "--code", str(code_path), "--eps", "0.05,0.2",
                       "--schedule", str(sched_path), "--max-frames", "10", "--json", str(json_path))
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["eps", "frames", "sym_errs", "ser", "ser_stderr", "fer", "mean_iters"]
    assert len(rows) == 3
    assert json.loads(json_path.read_text())["n"] == 100

    code, out2, _ = run(capsys, "--threads", "1", "simulate", "--code", str(code_path), "--eps", "0.05",
                        "--derive", "--max-frames", "10")
    assert code == 0 and out2.splitlines()[1] == out.splitlines()[1]


def test_simulate_errors(capsys, tmp_path):
    code, _, _ = run(capsys, "simulate", "--code", str(tmp_path / "missing"), "--eps", "0.1", "--derive")
    assert code == 4
    bad = tmp_path / "bad.qalist"
    bad.write_text("10 6\n")
    code, _, _ = run(capsys, "simulate", "--code", str(bad), "--eps", "0.1", "--derive")
    assert code == 4
    code_path = tmp_path / "c.qalist"
    run(capsys, "peg", "--n", "50", "--q", "4", "--dd", "l=3,r=5", "-o", str(code_path))
    code, _, err = run(capsys, "simulate", "--code", str(code_path), "--eps", "0.1")
    assert code == 2


def test_config_file(capsys, tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"q": 4, "eps": [0.1, 0.2]}))
    code, out, _ = run(capsys, "--config", str(conf), "capacity")
    assert code == 0 and len(out.splitlines()) == 3
    code, out, _ = run(capsys, "--config", str(conf), "capacity", "--eps", "0")
    assert code == 0 and float(out) == pytest.approx(1.0)
    conf.write_text(json.dumps({"colour": 1}))
    code, _, _ = run(capsys, "--config", str(conf), "capacity", "--q", "2", "--eps", "0")
    assert code == 2


def test_missing_arguments(capsys):
    code, _, _ = run(capsys, "capacity", "--q", "2")
    assert code == 2
    code, _, _ = run(capsys, "--threads", "0", "capacity", "--q", "2", "--eps", "0")
    assert code == 2


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "srlmp.cli", "capacity", "--q", "2", "--eps", "0.11"],
                         capture_output=True, text=True, check=True).stdout
    assert float(out) == pytest.approx(1 - 0.4999162, abs=1e-6)
