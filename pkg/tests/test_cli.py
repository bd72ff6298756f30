import json

from sosxxz import cli


def run_cli(args, tmp_path, name="out.jsonl"):
    out = tmp_path / name
    code = cli.main([*args, "--out", str(out)])
    return code, out.read_text() if out.exists() else ""


def rows_and_summary(text):
    lines = [json.loads(line) for line in text.strip().splitlines()]
    return lines[:-1], lines[-1]


def test_verify_vertex_passes(tmp_path):
    code, text = run_cli(["verify", "--suite", "vertex", "--n", "2", "--seed", "7", "--trials", "4"], tmp_path)
    assert code == 0
    rows, summary = rows_and_summary(text)
    assert rows and all(r["pass"] for r in rows)
    assert all(r["residual"] < 1e-10 for r in rows)
    assert summary["all_pass"] is True


def test_partition_n1_closed_form(tmp_path):
    code, text = run_cli(["partition", "--kind", "bminus", "--n", "1", "--method", "both", "--seed", "5"], tmp_path)
    assert code == 0
    rows, summary = rows_and_summary(text)
    det = complex(*summary["extra"]["value_det"])
    con = complex(*summary["extra"]["value_contract"])
    assert abs(det - con) < 1e-12 * abs(con)
    from sosxxz import partition as pt
    from sosxxz.cli import load_config
    import argparse

    cfg = cli.load_config(None, argparse.Namespace(n=1, seed=5, trials=None, tol_scale=None, sector=None))
    lam = complex(*summary["extra"]["lambdas"][0])
    closed = pt.closed_form_n1(lam, cfg.params.xi[0], cfg.params.delta, cfg.params.zeta, cfg.params.eta)
    assert abs(det - closed) < 1e-12 * abs(closed)


def test_bethe_constrained_run(tmp_path):
    code, text = run_cli(
        ["bethe", "--branch", "b1", "--m", "1", "--n", "2", "--constrained", "--seed", "3"], tmp_path
    )
    assert code == 0
    rows, summary = rows_and_summary(text)
    assert summary["extra"]["solutions"], "expected at least one verified solution"
    assert all(r["pass"] for r in rows)


def test_spectrum_reports_incompleteness_without_failing(tmp_path):
    code, text = run_cli(["spectrum", "--constrained", "--n", "2", "--seed", "3"], tmp_path)
    assert code == 0
    _, summary = rows_and_summary(text)
    extra = summary["extra"]
    assert extra["matched"] >= 1
    assert extra["matched"] + extra["unmatched_spectrum"] == extra["transfer_dimension"]


def strip_wall_time(text):
    lines = text.strip().splitlines()
    summary = json.loads(lines[-1])
    summary.pop("wall_time")
    return "\n".join(lines[:-1]) + json.dumps(summary, sort_keys=True)


def test_determinism_byte_identical(tmp_path):
    args = ["verify", "--suite", "sos", "--n", "2", "--seed", "11", "--trials", "3"]
    _, text1 = run_cli(args, tmp_path, "a.jsonl")
    _, text2 = run_cli(args, tmp_path, "b.jsonl")
    assert strip_wall_time(text1) == strip_wall_time(text2)


def test_config_file_roundtrip(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(
        json.dumps(
            {
                "N": 1,
                "eta": [0.47, 0.19],
                "xi": [[0.11, -0.07]],
                "delta": [0.83, -0.31],
                "zeta": [0.59, 0.42],
                "tau": [0.25, 0.13],
                "delta_bar": [0.91, 0.27],
                "zeta_bar": [0.67, -0.23],
                "tau_bar": [0.35, -0.17],
                "seed": 5,
            }
        )
    )
    code, text = run_cli(["partition", "--kind", "cplus", "--config", str(cfg_path)], tmp_path)
    assert code == 0
    _, summary = rows_and_summary(text)
    assert summary["config"]["N"] == 1
    assert summary["config"]["seed"] == 5


def test_exit_code_config_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["verify", "--config", str(bad)]) == 2


def test_exit_code_degenerate(tmp_path):
    cfg = tmp_path / "degenerate.json"
    cfg.write_text(json.dumps({"N": 1, "zeta": [0.83, -0.31], "delta": [0.83, -0.31]}))
    # delta = zeta makes theta = 0, a pole of every height-picture object
    assert cli.main(["partition", "--kind", "bminus", "--config", str(cfg), "--out", str(tmp_path / "x")]) == 3


def test_exit_code_tolerance_failure(tmp_path):
    code, text = run_cli(
        ["verify", "--suite", "vertex", "--n", "1", "--seed", "7", "--trials", "2", "--tol-scale", "1e-18"],
        tmp_path,
    )
    assert code == 4
    rows, summary = rows_and_summary(text)
    assert not summary["all_pass"]


def test_exit_code_solver_failure(tmp_path):
    # five pairwise separated roots cannot be accommodated at N = 2 inside
    # the search window, so the multi-start solve comes back empty
    assert (
        cli.main(["bethe", "--branch", "b1", "--m", "5", "--n", "2", "--seed", "1", "--out", str(tmp_path / "x")])
        == 5
    )


def test_worker_env_does_not_change_report(tmp_path, monkeypatch):
    args = ["verify", "--suite", "vertex", "--n", "2", "--seed", "11", "--trials", "3"]
    _, serial = run_cli(args, tmp_path, "serial.jsonl")
    monkeypatch.setenv("BETHE_SOS_THREADS", "4")
    _, threaded = run_cli(args, tmp_path, "threaded.jsonl")
    assert strip_wall_time(serial) == strip_wall_time(threaded)


def test_csv_format(tmp_path):
    out = tmp_path / "rows.csv"
    code = cli.main(["verify", "--suite", "vertex", "--n", "1", "--seed", "7", "--trials", "2",
                     "--format", "csv", "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "check,params_digest,residual,tolerance,pass"
    assert len(lines) > 1
