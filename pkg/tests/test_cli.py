import json

import pytest

from decaywalk.cli import main


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_simulate_deterministic_given_seed(capsys, tmp_path):
    args = [
        "simulate", "--alpha", "0", "--beta", "0", "--gamma", "0.25",
        "--n", "1000", "--trials", "100", "--seed", "7",
        "--checkpoints", "100,1000",
    ]
    code1, out1, _ = run_cli(args, capsys)
    code2, out2, _ = run_cli(args, capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    header = out1.splitlines()[0]
    assert header == "n,mean_T,var_T,mean_S,var_S,min_S,max_S,mean_sign_changes"
    assert len(out1.splitlines()) == 3


def test_simulate_variance_grows_in_drift_regime(capsys):
    code, out, _ = run_cli(
        [
            "simulate", "--alpha", "0.8", "--beta", "0", "--gamma", "0.3",
            "--n", "10000", "--trials", "400", "--seed", "13",
            "--checkpoints", "100,1000,10000",
        ],
        capsys,
    )
    assert code == 0
    var_s = [float(r.split(",")[4]) for r in out.splitlines()[1:]]
    assert var_s[0] < var_s[1] < var_s[2]


def test_simulate_missing_seed_is_reported(capsys):
    code, out, err = run_cli(
        ["simulate", "--alpha", "0", "--gamma", "1", "--n", "50", "--trials", "5"],
        capsys,
    )
    assert code == 0
    assert "using seed" in err


def test_simulate_rejects_nonpositive_gamma(capsys):
    code, _, err = run_cli(["simulate", "--alpha", "0", "--gamma", "0"], capsys)
    assert code == 2
    assert "gamma" in err


def test_simulate_requires_model_params(capsys):
    code, _, err = run_cli(["simulate", "--n", "10"], capsys)
    assert code == 2


def test_jsonl_rows_have_stable_keys(capsys):
    code, out, _ = run_cli(
        [
            "simulate", "--alpha", "0.2", "--beta", "0.1", "--gamma", "0.5",
            "--n", "200", "--trials", "50", "--seed", "3",
            "--checkpoints", "100,200", "--format", "jsonl",
        ],
        capsys,
    )
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    keys = [tuple(r.keys()) for r in rows]
    assert keys[0] == keys[1]
    assert rows[0]["schema"] == "decaywalk.v1"
    assert rows[0]["n"] == 100 and rows[1]["n"] == 200


def test_moments_constant_mean_S_for_memoryless(capsys):
    code, out, _ = run_cli(
        [
            "moments", "--alpha", "0", "--beta", "1", "--gamma", "0.8",
            "--checkpoints", "1,10,100",
        ],
        capsys,
    )
    assert code == 0
    rows = out.splitlines()[1:]
    mean_s = [float(r.split(",")[4]) for r in rows[:3]]
    assert mean_s == [1.0, 1.0, 1.0]


def test_moments_exact_value(capsys):
    code, out, _ = run_cli(
        ["moments", "--alpha", "0.5", "--beta", "1", "--gamma", "1", "--checkpoints", "3"],
        capsys,
    )
    assert code == 0
    row = out.splitlines()[1].split(",")
    assert float(row[1]) == pytest.approx(1.875, abs=1e-12)


def test_moments_limit_row_in_convergent_regime(capsys):
    code, out, _ = run_cli(
        [
            "moments", "--alpha", "0.25", "--beta", "1", "--gamma", "1",
            "--checkpoints", "10", "--format", "jsonl",
        ],
        capsys,
    )
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert rows[-1]["kind"] == "limit_mean_S"
    assert rows[-1]["value"] == pytest.approx(4.0 / 3.0, abs=1e-5)
    assert rows[-1]["terms"] >= 1


def test_moments_limit_outside_regime_is_usage_error(capsys):
    code, _, err = run_cli(
        ["moments", "--alpha", "0.8", "--gamma", "0.3", "--limit"], capsys
    )
    assert code == 2
    assert "gamma" in err


def test_phase_point_query(capsys):
    code, out, _ = run_cli(
        ["phase", "--alpha", "0.8", "--gamma", "0.5", "--format", "jsonl"], capsys
    )
    assert code == 0
    row = json.loads(out.splitlines()[0])
    assert row["kind"] == "diverges_monotone"


def test_phase_grid_deterministic(capsys):
    args = ["phase", "--grid", "21", "--format", "jsonl"]
    code1, out1, _ = run_cli(args, capsys)
    code2, out2, _ = run_cli(args, capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    kinds = {json.loads(r)["kind"] for r in out1.splitlines()}
    assert {"oscillatory", "diverges_monotone", "convergent"} <= kinds
    assert len(out1.splitlines()) == 21 * 21


def test_phase_requires_point_or_grid(capsys):
    code, _, err = run_cli(["phase"], capsys)
    assert code == 2


def test_config_file_with_flag_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# sample config\nalpha = 0.5\nbeta = 1\ngamma = 1\ncheckpoints = 3\nformat = csv\n"
    )
    code, out, _ = run_cli(["moments", "--config", str(cfg)], capsys)
    assert code == 0
    assert float(out.splitlines()[1].split(",")[1]) == pytest.approx(1.875, abs=1e-12)
    # flags win over the file
    code, out, _ = run_cli(
        ["moments", "--config", str(cfg), "--beta", "0", "--checkpoints", "3"], capsys
    )
    assert float(out.splitlines()[1].split(",")[1]) == 0.0


def test_config_file_syntax_error(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("alpha 0.5\n")
    code, _, err = run_cli(["moments", "--config", str(cfg)], capsys)
    assert code == 2
    assert "config error" in err


def test_output_file(capsys, tmp_path):
    out_path = tmp_path / "table.csv"
    code, out, _ = run_cli(
        [
            "moments", "--alpha", "0", "--beta", "0.5", "--gamma", "1",
            "--checkpoints", "5", "--out", str(out_path),
        ],
        capsys,
    )
    assert code == 0
    assert out == ""
    assert out_path.read_text().startswith("n,mean_T")


def test_verify_quick_report(capsys, tmp_path):
    report_path = tmp_path / "report.json"
    code, out, _ = run_cli(["verify", "--quick", "--out", str(report_path)], capsys)
    assert code == 0
    lines = [l for l in out.splitlines() if l.startswith(("PASS", "FAIL"))]
    assert len(lines) == 4
    assert all(l.startswith("PASS") for l in lines)
    report = json.loads(report_path.read_text())
    assert report["passed"] is True
    assert [c["criterion"] for c in report["criteria"]] == [1, 2, 10, 12]


def test_verify_detects_injected_fault(monkeypatch):
    """A corrupted coefficient recursion must fail the enumeration check."""
    import decaywalk.exact as exact
    from decaywalk.verify import criterion_1

    real = exact.moment_table

    def broken(params, checkpoints):
        table = real(params, checkpoints)
        table.m2_S[-1] += 1e-6
        return table

    monkeypatch.setattr(exact, "moment_table", broken)
    assert criterion_1().passed is False
