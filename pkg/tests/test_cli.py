import json

import numpy as np
import pytest

from spinclock.cli import main


def _run(*argv):
    return main(list(argv))


def test_spectrum_figure_writes_grid_and_sidecar(tmp_path):
    out = tmp_path / "f2a.csv"
    assert _run("spectrum", "--figure", "2a", "--points", "21",
                "--out", str(out)) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "axis1,axis2,re_t,im_t,abs_t"
    assert len(lines) == 1 + 21 * 21
    sidecar = tmp_path / "f2a.csv.provenance.json"
    doc = json.loads(sidecar.read_text())
    assert doc["command"] == "spectrum"
    assert doc["config"]["g_collective_hz"] == 5e6
    assert doc["axis1"]["points"] == 21


def test_spectrum_rerun_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert _run("spectrum", "--figure", "2b", "--points", "15",
                    "--out", str(out)) == 0
    assert a.read_bytes() == b.read_bytes()


def test_replay_reproduces_output(tmp_path):
    out = tmp_path / "orig.csv"
    assert _run("spectrum", "--figure", "2c", "--points", "15",
                "--out", str(out)) == 0
    replay = tmp_path / "replayed.csv"
    assert _run("replay", str(tmp_path / "orig.csv.provenance.json"),
                "--out", str(replay)) == 0
    assert out.read_bytes() == replay.read_bytes()
    # the 2c run also emits the operating-point slice, reproduced as well
    assert (tmp_path / "orig_slice.csv").read_bytes() \
        == (tmp_path / "replayed_slice.csv").read_bytes()


def test_spectrum_slice_contains_quadrature(tmp_path):
    out = tmp_path / "f2d.csv"
    assert _run("spectrum", "--figure", "2d", "--points", "11",
                "--out", str(out)) == 0
    header = (tmp_path / "f2d_slice.csv").read_text().splitlines()[0]
    assert header == "axis2,re_t,im_t,abs_t,quadrature"


def test_spectrum_custom_axes_and_json_format(tmp_path):
    out = tmp_path / "grid.json"
    assert _run("spectrum", "--preset", "current",
                "--axis1", "cavity_offset:-5e6:5e6:7",
                "--axis2", "probe_offset:-5e6:5e6:9",
                "--format", "json", "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert len(doc["abs_t"]) == 63
    assert max(doc["abs_t"]) <= 1.0


def test_spectrum_zero_points_is_config_error(tmp_path):
    rc = _run("spectrum", "--figure", "2a", "--points", "0",
              "--out", str(tmp_path / "x.csv"))
    assert rc == 2


def test_spectrum_bad_axis_variable(tmp_path):
    rc = _run("spectrum", "--axis1", "warp_factor:0:1:5",
              "--axis2", "probe_offset:0:1:5",
              "--out", str(tmp_path / "x.csv"))
    assert rc == 2


def test_operating_point_report(tmp_path, capsys):
    out = tmp_path / "op.json"
    assert _run("operating-point", "--preset", "current",
                "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["branch"] == "upper"
    assert doc["D_hz"] == pytest.approx(4.025e6, rel=0.01)
    assert abs(doc["dnudT_residual_hz_per_K"]) <= 1e-6 * 77e3
    assert doc["curvature_hz_per_K2"] == pytest.approx(241.0, rel=0.01)
    assert np.isfinite(doc["curvature_hz_per_T2"])
    assert doc["params"]["preset_name"] == "current"
    assert doc["closed_form_delta_rel"] < 0.02


def test_operating_point_stdout_when_no_out(capsys):
    assert _run("operating-point", "--preset", "outlook") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["D_hz"] == pytest.approx(30.04e6, rel=0.01)


def test_operating_point_positive_R_is_solver_error(capsys):
    rc = _run("operating-point", "--preset", "current", "--R", "0.3")
    assert rc == 3
    assert "no operating point" not in capsys.readouterr().out
    # message lands on stderr via the solver-error path


def test_operating_point_replay(tmp_path):
    out = tmp_path / "op.json"
    assert _run("operating-point", "--preset", "outlook",
                "--out", str(out)) == 0
    replay = tmp_path / "op2.json"
    assert _run("replay", str(tmp_path / "op.json.provenance.json"),
                "--out", str(replay)) == 0
    assert out.read_bytes() == replay.read_bytes()


def test_stability_csv_and_replay(tmp_path):
    out = tmp_path / "stab.csv"
    assert _run("stability", "--preset", "current", "--tau", "0.1..1e4",
                "--tau-points", "21", "--out", str(out)) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ("tau_s,sigma_total,sigma_shot,"
                        "floor_thermal,floor_magnetic,floor_pump")
    assert len(lines) == 22
    row1 = dict(zip(lines[0].split(","), map(float, lines[11].split(","))))
    assert row1["sigma_total"] >= row1["sigma_shot"]

    replay = tmp_path / "stab2.csv"
    assert _run("replay", str(tmp_path / "stab.csv.provenance.json"),
                "--out", str(replay)) == 0
    assert out.read_bytes() == replay.read_bytes()


def test_stability_sigma_at_one_second(tmp_path):
    out = tmp_path / "stab.csv"
    assert _run("stability", "--preset", "current", "--tau", "1..1e4",
                "--tau-points", "5", "--out", str(out)) == 0
    first = out.read_text().splitlines()[1].split(",")
    tau, sigma_shot = float(first[0]), float(first[2])
    assert tau == 1.0
    assert sigma_shot == pytest.approx(7.0e-14, rel=0.01)


def test_stability_zero_power_is_config_error(tmp_path):
    rc = _run("stability", "--preset", "current",
              "--power-photons-per-s", "0",
              "--out", str(tmp_path / "x.csv"))
    assert rc == 2


def test_stability_bad_tau_range(tmp_path):
    rc = _run("stability", "--tau", "5..1", "--out", str(tmp_path / "x.csv"))
    assert rc == 2


def test_overrides_recorded_in_provenance(tmp_path):
    out = tmp_path / "s.csv"
    assert _run("stability", "--preset", "current", "--g-hz", "2e6",
                "--dT-mk", "5", "--B-nt", "20", "--seed", "42",
                "--out", str(out)) == 0
    doc = json.loads((tmp_path / "s.csv.provenance.json").read_text())
    assert doc["config"]["g_collective_hz"] == 2e6
    assert doc["config"]["dt_stab_k"] == pytest.approx(5e-3)
    assert doc["db_stab_t"] == pytest.approx(20e-9)
    assert doc["seed"] == 42
