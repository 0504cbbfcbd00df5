import json

import numpy as np
import pytest

from quditsteer.cli import (
    CSV_HEADER,
    SweepConfig,
    compute_row,
    main,
    run_optics_verify,
    run_sweep,
)


def small_config(**kw):
    base = dict(d=3, p_min=0.95, p_max=1.0, grid=2, visibility=1.0,
                trials=3, seed=7, mode="violation-only")
    base.update(kw)
    return SweepConfig(**base)


def test_sweep_saturation_point():
    config = small_config()
    rows, csv_text = run_sweep(config)
    last = rows[-1]
    assert last.error == ""
    assert abs(last.p_eff - 1.0) < 1e-12
    assert abs(last.s - 2.0) < 1e-9
    assert abs(last.h_min - np.log2(3)) < 1e-4
    assert last.steering_detected
    assert csv_text.splitlines()[0] == CSV_HEADER
    assert len(csv_text.splitlines()) == config.grid + 1


def test_sweep_visibility_headline():
    config = small_config(p_min=1.0, p_max=1.0, grid=1, visibility=0.987)
    row = run_sweep(config)[0][0]
    assert abs(row.s - 1.9827) < 1e-3
    assert abs(row.w_qrs - (row.s - row.s_lhs) / 3) < 1e-12


def test_sweep_qubit_threshold():
    config = small_config(d=2, p_min=0.65, p_max=0.75, grid=3)
    rows, _ = run_sweep(config)
    for row in rows:
        assert abs(row.s - (1 + row.p_eff)) < 1e-9
        assert row.steering_detected == (row.p_eff > 1 / np.sqrt(2))
    assert [r.steering_detected for r in rows] == [False, False, True]


def test_sweep_byte_identical(tmp_path):
    config = small_config()
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    run_sweep(config, out_path=out1)
    run_sweep(config, out_path=out2)
    assert out1.read_bytes() == out2.read_bytes()


def test_sweep_parallel_matches_serial(tmp_path):
    serial = small_config()
    parallel = small_config(workers=2)
    out1, out2 = tmp_path / "serial.csv", tmp_path / "parallel.csv"
    run_sweep(serial, out_path=out1)
    run_sweep(parallel, out_path=out2)
    assert out1.read_bytes() == out2.read_bytes()


def test_sweep_report(tmp_path):
    out = tmp_path / "sweep.csv"
    report = tmp_path / "report.json"
    config = small_config()
    run_sweep(config, out_path=out, report_path=report)
    data = json.loads(report.read_text())
    assert data["rows"] == config.grid
    assert data["errors"] == {}
    assert data["config"]["d"] == 3


def test_compute_row_error_is_recorded(monkeypatch):
    config = small_config()
    import quditsteer.cli as cli

    def boom(*args, **kwargs):
        raise RuntimeError("forced failure")

    monkeypatch.setattr(cli, "guessing_probability", boom)
    row = compute_row(config, 0)
    assert "forced failure" in row.error
    assert "error" in row.csv_line()


def test_main_sweep_exit_codes(tmp_path):
    out = tmp_path / "out.csv"
    code = main([
        "sweep", "--d", "3", "--p-min", "1.0", "--p-max", "1.0", "--grid", "1",
        "--visibility", "1.0", "--trials", "2", "--seed", "1",
        "--mode", "violation-only", "--out", str(out),
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 2


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"d": 3, "grid": 1, "p_min": 1.0, "p_max": 1.0,
                               "trials": 2, "visibility": 0.5, "mode": "violation-only"}))
    out = tmp_path / "out.csv"
    code = main(["sweep", "--config", str(cfg), "--visibility", "1.0", "--out", str(out)])
    assert code == 0
    row = out.read_text().splitlines()[1].split(",")
    assert float(row[1]) == pytest.approx(1.0)  # flag beat the config file


def test_optics_verify_shipped_networks():
    reports = run_optics_verify(None)
    assert len(reports) == 4
    assert all(r["passed"] for r in reports)


def test_optics_verify_corrupted_angle(tmp_path, capsys):
    from importlib import resources

    raw = resources.files("quditsteer.networks").joinpath("bsm_d3.net").read_text()
    bad = tmp_path / "bad.net"
    bad.write_text(raw.replace("hwp 4 45", "hwp 4 44"))
    code = main(["optics-verify", str(bad)])
    assert code == 1
    outp = capsys.readouterr().out
    assert "FAIL" in outp


def test_optics_verify_empty_file(tmp_path, capsys):
    empty = tmp_path / "empty.net"
    empty.write_text("")
    code = main(["optics-verify", str(empty)])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_witness_subcommand(capsys):
    code = main(["witness", "--p", "1.0", "--visibility", "1.0", "--d", "3"])
    assert code == 0
    out = capsys.readouterr().out
    assert "S          = 2.000000" in out
    assert "steering   = yes" in out


def test_randomness_subcommand(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    code = main([
        "randomness", "--p", "1.0", "--visibility", "1.0", "--d", "3",
        "--mode", "full-table", "--certificate", str(cert),
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert "H_min      = 1.584963" in out
    data = json.loads(cert.read_text())
    assert data["h_min"] == pytest.approx(np.log2(3), abs=1e-4)


def test_mc_subcommand(capsys):
    code = main(["mc", "--p", "1.0", "--visibility", "0.987", "--d", "3",
                 "--trials", "20", "--seed", "3"])
    assert code == 0
    out = capsys.readouterr().out
    assert "S stddev" in out


def test_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(p_min=0.9, p_max=0.5)
    with pytest.raises(ValueError):
        SweepConfig(trials=1)
    with pytest.raises(ValueError):
        SweepConfig(mode="bogus")
    with pytest.raises(ValueError):
        SweepConfig(d=5)
