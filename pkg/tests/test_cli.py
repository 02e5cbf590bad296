import json

import pytest

from gpesplit.cli import main, read_config
from gpesplit.experiments import BENCH_METHODS

HEADER = "t,mass,impulse_re,impulse_im,energy_paper,energy_std,l2err_sq"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate_csv(capsys):
    code, out, _ = run(capsys, "simulate", "--method", "tssp", "--problem", "single",
                       "--T", "1", "--N", "100")
    lines = out.splitlines()
    assert code == 0 and lines[0] == HEADER and len(lines) == 102
    assert all(len(v.split("e")[0].split(".")[1]) == 6 for v in lines[1].split(","))


def test_simulate_is_byte_stable(capsys):
    args = ("simulate", "--method", "conservative-cn", "--M", "64", "--T", "0.2", "--N", "20")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_missing_method(capsys):
    code, _, err = run(capsys, "simulate")
    assert code == 1 and "usage" in err


def test_unknown_method_lists_names(capsys):
    code, _, err = run(capsys, "simulate", "--method", "leapfrog")
    assert code == 1 and "tssp" in err and "aba-icn" in err


def test_bad_grid_is_usage_error(capsys):
    assert run(capsys, "simulate", "--method", "tssp", "--M", "63")[0] == 1


def test_instability_exit_code(capsys, tmp_path):
    out = tmp_path / "run.csv"
    code, _, _ = run(capsys, "simulate", "--method", "ab-fd-explicit", "--M", "1024",
                     "--T", "1", "--N", "10", "--out", str(out))
    lines = out.read_text().splitlines()
    assert code == 2 and lines[0] == HEADER
    assert lines[-1].startswith("# aborted at step ")
    assert len(lines) == int(lines[-1].split()[-1]) + 2


def test_json_output(capsys):
    code, out, _ = run(capsys, "simulate", "--method", "bab-spec", "--T", "0.1", "--N", "10",
                       "--record-every", "5", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["aborted_at"] is None and len(doc["records"]) == 3
    assert list(doc["records"][0]) == HEADER.split(",")


def test_two_soliton_without_reference_reports_nan(capsys):
    code, out, _ = run(capsys, "simulate", "--method", "tssp", "--problem", "two",
                       "--T", "0.1", "--N", "10", "--record-every", "10")
    assert code == 0 and out.splitlines()[-1].endswith(",nan")


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# experiment\nmethod = aba-spec\nT = 0.5\nN = 50  # steps\n"
                   "record_every = 25\nsymmetric-width = false\n")
    assert read_config(str(cfg))["record-every"] == "25"
    code, out, _ = run(capsys, "--config", str(cfg), "simulate", "--N", "100")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 6 and lines[-1].startswith("5.000000e-01")


def test_config_errors(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run(capsys, "--config", str(cfg), "simulate", "--method", "tssp")[0] == 1
    cfg.write_text("no equals sign\n")
    assert run(capsys, "--config", str(cfg), "simulate", "--method", "tssp")[0] == 1


def test_converge_layout(capsys):
    args = ("converge", "--method", "tssp", "--base-M", "32", "--base-N", "32",
            "--workers", "1")
    code, out, _ = run(capsys, *args)
    rows = [line.split(",") for line in out.splitlines()]
    assert code == 0
    assert rows[0] == ["dt_factor", "dx/4", "dx/8", "dx/16"]
    assert [r[0] for r in rows[1:4]] == ["4dt", "8dt", "16dt"]
    assert all(float(v) >= 0 for r in rows[1:4] for v in r[1:])
    assert [r[0] for r in rows[4:]] == ["order_dt_4-8", "order_dt_8-16", "order_dx_4dt",
                                       "order_dx_8dt", "order_dx_16dt"]
    assert run(capsys, *args)[1] == out


def test_bad_thread_env(capsys, monkeypatch):
    monkeypatch.setenv("GPE_THREADS", "many")
    assert run(capsys, "converge", "--method", "tssp", "--base-M", "32", "--base-N", "32")[0] == 1


def test_bench_rows_match_simulate(capsys):
    code, out, _ = run(capsys, "bench", "--horizons", "0.05,0.1", "--M", "64", "--dt", "0.01",
                       "--repeats", "1")
    rows = [line.split(",") for line in out.splitlines()]
    assert code == 0
    assert rows[0] == ["method", "seconds_T0.05", "seconds_T0.1", "error_T0.05",
                       "error_T0.1", "status"]
    assert [r[0] for r in rows[1:]] == [m.value for m in BENCH_METHODS]
    assert all(float(v) > 0 for r in rows[1:] for v in r[1:3])
    for r in rows[1:]:
        _, sim, _ = run(capsys, "simulate", "--method", r[0], "--M", "64", "--T", "0.1",
                        "--N", "10", "--record-every", "10")
        assert sim.splitlines()[-1].split(",")[-1] == r[4]
