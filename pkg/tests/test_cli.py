import csv
import io
import json
import subprocess
import sys

import pytest

from epkit.cli import main
from epkit.params import EpParams
from epkit.partition import simulate, stats_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate_single_ball(capsys):
    code, out, _ = run(capsys, "simulate", "--alpha", "0.6", "--theta", "1", "--n", "1")
    assert code == 0
    assert out == '{"n":1,"k":1,"s":{"1":1}}\n'


def test_simulate_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for f in (a, b):
        assert main(["--seed", "7", "--out", str(f), "simulate", "--alpha", "0.6", "--theta", "1",
                     "--n", "1000"]) == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.json"
    main(["--seed", "8", "--out", str(c), "simulate", "--alpha", "0.6", "--theta", "1", "--n", "1000"])
    assert c.read_bytes() != a.read_bytes()


def test_simulate_bad_alpha(capsys):
    code, out, err = run(capsys, "simulate", "--alpha", "1.2", "--theta", "1", "--n", "10")
    assert code == 2 and out == "" and err


def test_simulate_trajectory(capsys):
    code, out, _ = run(capsys, "--seed", "3", "simulate", "--alpha", "0.5", "--theta", "0.5",
                       "--trajectory", "10,100,1000")
    assert code == 0
    path = json.loads(out)
    assert [p["n"] for p in path] == [10, 100, 1000]
    assert path[0]["k"] <= path[1]["k"] <= path[2]["k"]


def test_simulate_then_fit_roundtrip(tmp_path, capsys):
    f = tmp_path / "stats.json"
    assert main(["--seed", "1", "--out", str(f), "simulate", "--alpha", "0.6", "--theta", "1",
                 "--n", str(2**14)]) == 0
    code, out, _ = run(capsys, "fit", "--input", str(f))
    assert code == 0
    res = json.loads(out)
    assert res["n"] == 2**14 and res["method"] == "mle"
    assert json.loads(f.read_text())["k"] == res["k"]
    assert 0.45 < res["alpha_hat"] < 0.75
    assert res["ci"]["lo"] < res["alpha_hat"] < res["ci"]["hi"]
    assert res["converged"] and not res["boundary_hit"] and res["degenerate"] is False

    code, out, _ = run(capsys, "fit", "--input", str(f), "--plug-theta", "0")
    q = json.loads(out)
    assert code == 0 and q["method"] == "qmle" and q["theta_plugin"] == 0
    assert abs(q["alpha_hat"] - res["alpha_hat"]) < 0.05


def test_fit_degenerate_exit_3(tmp_path, capsys):
    f = tmp_path / "deg.json"
    f.write_text('{"n":3,"k":1,"s":{"3":1}}')
    code, out, err = run(capsys, "fit", "--input", str(f))
    assert code == 3 and out == ""
    assert "1<K_n<n" in err


def test_fit_parse_failure_exit_2(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text("{nope")
    assert run(capsys, "fit", "--input", str(f))[0] == 2
    assert run(capsys, "fit", "--input", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "fit", "--input", str(f), "--alpha-bounds", "0.9,0.1")[0] == 2


def test_fit_from_blocks_and_csv(tmp_path, capsys):
    f = tmp_path / "blocks.txt"
    f.write_text("\n".join(["1"] * 30 + ["2"] * 10 + ["5"] * 4 + ["40"]) + "\n")
    code, out, _ = run(capsys, "--format", "csv", "fit", "--blocks", str(f))
    assert code == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["k"] == "45" and row["n"] == "110" and row["method"] == "mle"
    assert float(row["ci_lo"]) < float(row["alpha_hat"]) < float(row["ci_hi"])


def test_fit_stdin(monkeypatch, capsys):
    st = simulate(EpParams(0.5, 2.0), 3000, 4)
    monkeypatch.setattr(sys, "stdin", io.StringIO(stats_to_json(st)))
    code, out, _ = run(capsys, "fit", "--input", "-")
    assert code == 0 and json.loads(out)["k"] == st.k


def test_sparsity_triangle_warns(tmp_path, capsys):
    f = tmp_path / "tri.txt"
    f.write_text("a b\nb c\nc a\n")
    code, out, err = run(capsys, "test-sparsity", "--edges", str(f), "--mu", "2", "--delta", "0.05")
    # three vertices of degree 2: K_n=3 < n=6, fit is possible but tiny
    assert code == 0
    res = json.loads(out)
    assert res["k"] == 3 and "K_n=3" in res["warning"] and "K_n=3" in err
    assert res["critical"] == pytest.approx(1.6448536, abs=1e-7)


def test_sparsity_power_case(tmp_path, capsys):
    st = simulate(EpParams(0.7, 1.0), 2**16, 11)
    f = tmp_path / "deg.txt"
    f.write_text("\n".join(str(j) for j, c in st.s.items() for _ in range(c)) + "\n")
    code, out, err = run(capsys, "test-sparsity", "--degrees", str(f))
    res = json.loads(out)
    assert code == 0 and res["reject"] and res["warning"] is None and err == ""
    assert res["verdict"].startswith("reject")


def test_sparsity_empty_graph(tmp_path, capsys):
    f = tmp_path / "empty.txt"
    f.write_text("# nothing\n")
    assert run(capsys, "test-sparsity", "--edges", str(f))[0] == 2


def test_experiment_ialpha_rows(capsys):
    code, out, _ = run(capsys, "--format", "csv", "experiment", "--preset", "ialpha", "--grid", "0.1:0.9:0.1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 9
    assert float(rows[4]["I_alpha"]) > 4


def test_experiment_theta_limit_density(capsys):
    code, out, _ = run(capsys, "--format", "csv", "experiment", "--preset", "theta-limit", "--alpha", "0.5",
                       "--theta", "1", "--draws", "100000")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    total = sum(float(r["density"]) * (float(r["bin_right"]) - float(r["bin_left"])) for r in rows)
    assert abs(total - 1) < 1e-6


def test_experiment_coverage_column(capsys, monkeypatch):
    monkeypatch.setenv("EP_KIT_THREADS", "1")
    code, out, _ = run(capsys, "--format", "csv", "experiment", "--preset", "coverage", "--alpha", "0.6",
                       "--theta", "1", "--reps", "500", "--grid", "128,1024")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2 * 3
    assert all(0 <= float(r["coverage"]) <= 1 for r in rows)


def test_experiment_json_is_deterministic_across_threads(capsys, monkeypatch):
    args = ["--seed", "2", "experiment", "--preset", "efficiency", "--reps", "8", "--grid", "64,512"]
    monkeypatch.setenv("EP_KIT_THREADS", "1")
    one = run(capsys, *args)[1]
    monkeypatch.setenv("EP_KIT_THREADS", "2")
    two = run(capsys, *args)[1]
    assert one == two and json.loads(one)["plan"]["seed"] == 2


def test_bad_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("EP_KIT_THREADS", "many")
    assert run(capsys, "experiment", "--preset", "efficiency", "--reps", "2", "--grid", "64")[0] == 2


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "epkit.cli", "simulate", "--alpha", "0.6", "--theta", "1",
                        "--n", "1"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == '{"n":1,"k":1,"s":{"1":1}}\n'
