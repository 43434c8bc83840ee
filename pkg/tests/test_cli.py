import numpy as np
from click.testing import CliRunner

from bppsim import dominance as dom
from bppsim import sst_models as sm
from bppsim.cli import main

runner = CliRunner()


def serialized_dominant_triple():
    return dom.triple_from_model(sm.Mallows(1.0, 3), 0, 1, 2).serialize()


def test_check_ud_dominant():
    res = runner.invoke(main, ["check-ud", "--triple", serialized_dominant_triple()])
    assert res.exit_code == 0
    assert "uniformly dominant" in res.output


def test_check_ud_not_dominant():
    iid = ",".join(["0.125"] * 8)
    res = runner.invoke(main, ["check-ud", "--triple", iid])
    assert res.exit_code == 1


def test_check_ud_malformed():
    res = runner.invoke(main, ["check-ud", "--triple", "0.5,0.5"])
    assert res.exit_code == 1


def test_model_and_check_sst(tmp_path):
    cfg = tmp_path / "m.cfg"
    cfg.write_text("variant=mallows\neta=1.0\nn_items=3\n")
    res = runner.invoke(main, ["model", "--config", str(cfg)])
    assert res.exit_code == 0, res.output
    assert "Mallows" in res.output and "ok" in res.output
    res = runner.invoke(main, ["check-sst", "--config", str(cfg)])
    assert res.exit_code == 0, res.output


def test_pay_end_to_end(tmp_path):
    assign = tmp_path / "assign.csv"
    assign.write_text("0,0,1\n1,2,1\n2,2,0\n3,1,0\n4,1,2\n5,0,2\n")
    reports = tmp_path / "reports.csv"
    reports.write_text("0,1\n1,1\n2,-1\n3,-1\n4,1\n5,-1\n")
    out = tmp_path / "pay.csv"
    res = runner.invoke(main, ["--output", str(out), "pay",
                               "--assignment", str(assign), "--reports", str(reports)])
    assert res.exit_code == 0, res.output
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "agent_id,payment"
    assert len(lines) == 7


def test_pay_rejects_inadmissible(tmp_path):
    assign = tmp_path / "assign.csv"
    assign.write_text("0,0,1\n")
    reports = tmp_path / "reports.csv"
    reports.write_text("0,1\n")
    res = runner.invoke(main, ["pay", "--assignment", str(assign), "--reports", str(reports)])
    assert res.exit_code == 1
    assert "admissible" in res.output


def test_equilibria_csv(tmp_path):
    out = tmp_path / "eq.csv"
    res = runner.invoke(main, ["--output", str(out), "equilibria",
                               "--triple", serialized_dominant_triple(), "--grid", "11"])
    assert res.exit_code == 0, res.output
    header = out.read_text().splitlines()[0]
    assert header == "sigma_11,sigma_m11,is_eq,classification,expected_payment"


def test_ising_command(tmp_path):
    edges = tmp_path / "edges.csv"
    edges.write_text("".join(f"{i},{(i + 1) % 10}\n" for i in range(10)))
    res = runner.invoke(main, ["ising", "--edges", str(edges), "--beta", "0.1"])
    assert res.exit_code == 0, res.output
    assert "holds=True" in res.output
    res = runner.invoke(main, ["ising", "--edges", str(edges), "--beta", "0.1",
                               "--i", "0", "--j", "1", "--k", "5"])
    assert res.exit_code == 0, res.output
    assert "dominant=True" in res.output


def test_uniqueness_audit(tmp_path):
    f = tmp_path / "u.csv"
    # 2*bpp + 1 in lexicographic (s_i, s_j, s_k) order
    from bppsim.uniqueness import bpp_table
    vals = (2.0 * bpp_table() + 1.0).ravel()
    f.write_text(",".join(str(v) for v in vals))
    res = runner.invoke(main, ["uniqueness", "audit", "--payment", str(f)])
    assert res.exit_code == 0, res.output
    assert "certificate" in res.output
    f.write_text("1,0,0,0,0,0,0,0")
    res = runner.invoke(main, ["uniqueness", "audit", "--payment", str(f)])
    assert res.exit_code == 1
    assert "counterexample" in res.output


def rankings_file(tmp_path):
    rng = np.random.default_rng(0)
    lines = []
    for i in range(6):
        perm = rng.permutation(5)
        lines.append(",".join([f"a{i}"] + [str(x) for x in perm]))
    path = tmp_path / "rankings.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


def test_experiment_comparison_reproducible(tmp_path):
    path = rankings_file(tmp_path)
    out1 = tmp_path / "p1.csv"
    out2 = tmp_path / "p2.csv"
    args = ["--seed", "5", "--trials", "10"]
    res = runner.invoke(main, args + ["--output", str(out1), "experiment", "comparison",
                                      "--rankings", str(path), "--debug"])
    assert res.exit_code == 0, res.output
    res = runner.invoke(main, args + ["--output", str(out2), "experiment", "comparison",
                                      "--rankings", str(path)])
    assert res.exit_code == 0, res.output
    assert out1.read_bytes() == out2.read_bytes()


def test_experiment_comparison_shift(tmp_path):
    path = rankings_file(tmp_path)
    out = tmp_path / "p.csv"
    res = runner.invoke(main, ["--trials", "5", "--output", str(out), "experiment",
                               "comparison", "--rankings", str(path), "--shift", "100"])
    assert res.exit_code == 0, res.output
    rows = out.read_text().strip().splitlines()[1:]
    assert all(float(r.split(",")[2]) > 90 for r in rows)


def test_experiment_network_and_ecdf(tmp_path):
    edges = tmp_path / "edges.csv"
    labels = tmp_path / "labels.csv"
    n = 12
    edges.write_text("".join(f"{i},{(i + 1) % n}\n" for i in range(n)))
    rng = np.random.default_rng(1)
    labels.write_text("".join(f"{i},{rng.choice([-1, 1])}\n" for i in range(n)))
    out = tmp_path / "pay.csv"
    res = runner.invoke(main, ["--trials", "10", "--output", str(out), "experiment",
                               "network", "--edges", str(edges), "--labels", str(labels)])
    assert res.exit_code == 0, res.output
    assert out.read_text().startswith("agent_id,setting,payment")
    ecdf_out = tmp_path / "ecdf.csv"
    res = runner.invoke(main, ["--output", str(ecdf_out), "ecdf", "--payments", str(out)])
    assert res.exit_code == 0, res.output
    lines = ecdf_out.read_text().strip().splitlines()
    assert lines[0] == "value,cumulative_fraction"
    assert float(lines[-1].split(",")[1]) == 1.0
