"""End-to-end tests of the command line front end."""
import json
import math

import numpy as np
import pytest

from hdgbs.cli import main
from hdgbs.matrices import matrix_to_json


def run(args):
    return main(args)


def test_instance_new_and_prob(tmp_path):
    inst_path = tmp_path / "inst.json"
    assert run(["instance", "new", "--r", "0.3", "--a", "2", "--D", "1",
                "--C", "1", "--seed", "42", "--out", str(inst_path)]) == 0
    obj = json.loads(inst_path.read_text())
    assert obj["a"] == 2 and obj["D"] == 1 and obj["C"] == 1
    out = tmp_path / "p.txt"
    assert run(["prob", "--instance", str(inst_path), "--pattern", "0,0",
                "--out", str(out)]) == 0
    p = float(out.read_text().split()[0])
    assert p == pytest.approx(math.cosh(0.3) ** -2, rel=1e-10)


def test_instance_new_byte_identical(tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    args = ["instance", "new", "--r", "0.8", "--a", "3", "--D", "2", "--C", "1",
            "--seed", "7"]
    assert run(args + ["--out", str(p1)]) == 0
    assert run(args + ["--out", str(p2)]) == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_haf_fast_and_enum(tmp_path):
    mat = tmp_path / "m.json"
    mat.write_text(json.dumps(matrix_to_json(np.ones((4, 4)))))
    out = tmp_path / "h.txt"
    assert run(["haf", "--in", str(mat), "--method", "enum",
                "--out", str(out)]) == 0
    re_, im_ = (float(x) for x in out.read_text().split())
    assert re_ == pytest.approx(3.0) and im_ == pytest.approx(0.0)
    assert run(["haf", "--in", str(mat), "--method", "fast",
                "--out", str(out)]) == 0
    re_, im_ = (float(x) for x in out.read_text().split())
    assert re_ == pytest.approx(3.0, rel=1e-12)


def test_lossbudget_copies(tmp_path):
    out = tmp_path / "b.json"
    assert run(["instance", "lossbudget", "--a", "6", "--D", "3", "--C", "1",
                "--eta-bs", "0.9", "--eta-unit", "0.998", "--mode", "copies",
                "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["total_transmission"] == pytest.approx(0.9 ** 3 * 0.998 ** 43,
                                                      rel=1e-12)
    assert rep["path_length_exact"] == 43


def test_photondist_methods_agree(tmp_path):
    closed, conv = tmp_path / "c.csv", tmp_path / "v.csv"
    base = ["photondist", "--modes", "6", "--r", "0.7", "--eta", "0.4",
            "--nmax", "60"]
    assert run(base + ["--method", "closed", "--out", str(closed)]) == 0
    assert run(base + ["--method", "conv", "--out", str(conv)]) == 0
    rows_c = closed.read_text().strip().splitlines()
    rows_v = conv.read_text().strip().splitlines()
    assert rows_c[0] == "n,prob,log_prob"
    assert len(rows_c) == 62
    for rc, rv in zip(rows_c[1:], rows_v[1:]):
        pc, pv = float(rc.split(",")[1]), float(rv.split(",")[1])
        assert abs(pc - pv) < 1e-10


def test_photondist_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["photondist", "--modes", "4", "--r", "0.5", "--eta", "0.9",
            "--nmax", "30", "--method", "closed"]
    assert run(base + ["--out", str(a)]) == 0
    assert run(base + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_hiding_spectra_csv(tmp_path):
    out = tmp_path / "s.csv"
    assert run(["hiding", "spectra", "--M", "30", "--K", "30", "--N", "3",
                "--samples", "40", "--bins", "12", "--seed", "5",
                "--out", str(out)]) == 0
    rows = out.read_text().strip().splitlines()
    assert rows[0] == "bin_lo,bin_hi,mass_coe,mass_gsym"
    assert len(rows) == 13
    mass = sum(float(r.split(",")[2]) for r in rows[1:])
    assert mass == pytest.approx(1.0, abs=1e-9)


def test_hiding_scan_csv(tmp_path):
    cfg = tmp_path / "scan.json"
    cfg.write_text(json.dumps({"samples": 30, "bins": 10,
                               "pairs": [{"M": 25, "N": 3, "K": 25},
                                         {"M": 36, "N": 3, "K": 18}]}))
    out = tmp_path / "scan.csv"
    assert run(["hiding", "scan", "--config", str(cfg), "--seed", "3",
                "--out", str(out)]) == 0
    rows = out.read_text().strip().splitlines()
    assert rows[0] == "M,N,K,samples,bins,tv"
    assert len(rows) == 3
    assert rows[1].startswith("25,3,25,30,10,")


def test_tn_cost_and_contract(tmp_path):
    inst_path = tmp_path / "inst.json"
    run(["instance", "new", "--r", "0.3", "--a", "2", "--D", "2", "--C", "1",
         "--seed", "9", "--out", str(inst_path)])
    plan_path = tmp_path / "plan.json"
    assert run(["tn", "cost", "--instance", str(inst_path), "--cutoff", "4",
                "--trials", "8", "--out", str(plan_path)]) == 0
    plan = json.loads(plan_path.read_text())
    assert plan["est_flops"] > 0 and plan["max_tensor_elems"] >= 4
    assert all(len(step) == 2 for step in plan["order"])
    out = tmp_path / "amp.txt"
    assert run(["tn", "contract", "--instance", str(inst_path), "--cutoff", "8",
                "--pattern", "0,0,0,0", "--out", str(out)]) == 0
    re_, im_, prob = (float(x) for x in out.read_text().split())
    assert re_ ** 2 + im_ ** 2 == pytest.approx(math.cosh(0.3) ** -4, rel=1e-6)
    assert prob == pytest.approx(math.cosh(0.3) ** -4, rel=1e-6)


def test_bench_pipeline(tmp_path):
    csv = tmp_path / "bench.csv"
    assert run(["bench", "run", "--sizes", "8,10,12,14,16,18,20,22",
                "--reps", "1", "--seed", "1", "--out", str(csv)]) == 0
    rows = csv.read_text().strip().splitlines()
    assert rows[0] == "n,wall_seconds,reps,threads"
    assert len(rows) == 9
    model_path = tmp_path / "model.json"
    assert run(["bench", "fit", "--in", str(csv), "--label", "desk",
                "--out", str(model_path)]) == 0
    model = json.loads(model_path.read_text())
    assert model["c"] > 0 and model["machine_label"] == "desk"
    scaled_path = tmp_path / "scaled.json"
    assert run(["bench", "extrapolate", "--model", str(model_path),
                "--rmax-ratio", "122.8", "--out", str(scaled_path)]) == 0
    scaled = json.loads(scaled_path.read_text())
    assert scaled["c"] == pytest.approx(model["c"] / 122.8, rel=1e-12)


def test_bench_sample_cost(tmp_path):
    dist_path = tmp_path / "dist.csv"
    run(["photondist", "--modes", "8", "--r", "0.6", "--eta", "0.5",
         "--nmax", "40", "--method", "closed", "--out", str(dist_path)])
    out = tmp_path / "cost.json"
    assert run(["bench", "sample-cost", "--dist", str(dist_path),
                "--c", "1e-12", "--overhead", "100", "--p-min", "1e-7",
                "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["seconds"] > 0
    assert 0 < rep["n_cut"] <= 40


def test_exit_code_contract_violation(tmp_path):
    assert run(["photondist", "--modes", "4", "--r", "0.5", "--eta", "1.5",
                "--nmax", "10", "--out", str(tmp_path / "x.csv")]) == 2


def test_exit_code_resource_limit(tmp_path):
    assert run(["instance", "new", "--r", "0.5", "--a", "10", "--D", "5",
                "--C", "1", "--seed", "0", "--out", str(tmp_path / "x.json")]) == 3
