import json
import math

import pytest

from levopt.cli import main


def run_cli(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_reproduce_kiesel_passes(capsys):
    code, out = run_cli(capsys, "reproduce", "--scenario", "kiesel")
    assert code == 0
    claims = json.loads(out)
    assert all(c["passed"] for c in claims)
    ids = {c["claim_id"] for c in claims}
    assert {"trap-frequency", "settled-temperature", "thermal-rms",
            "trap-noise-rms", "escape-flag", "cooling-power-1e-7-mbar",
            "energetic-identity"} <= ids


def test_reproduce_gieseler_passes(capsys):
    code, out = run_cli(capsys, "reproduce", "--scenario", "gieseler")
    assert code == 0
    claims = json.loads(out)
    assert all(c["passed"] for c in claims)
    assert any(c["claim_id"] == "optimum-gain-1e-11-mbar" for c in claims)


def test_reproduce_byte_identical(capsys):
    _, first = run_cli(capsys, "reproduce", "--scenario", "kiesel")
    _, second = run_cli(capsys, "reproduce", "--scenario", "kiesel")
    assert first == second


def test_cavity_sweep_row_count_and_round_trip(capsys, tmp_path):
    out_file = tmp_path / "sweep.csv"
    code, _ = run_cli(capsys, "cavity", "--scenario", "kiesel",
                      "--sweep", "pressure=1e-10:1e-3:40,log",
                      "--format", "csv", "--out", str(out_file))
    assert code == 0
    lines = out_file.read_text().strip().splitlines()
    header, rows = lines[0].split(","), lines[1:]
    assert len(rows) == 40
    # numeric columns round-trip exactly through repr
    idx = header.index("omega_z_rad_s")
    values = {float(r.split(",")[idx]) for r in rows if r.split(",")[idx] != "diverges"}
    assert len(values) == 1  # trap frequency is pressure independent


def test_cavity_sweep_marks_divergent_rows(capsys):
    code, out = run_cli(capsys, "cavity", "--scenario", "kiesel",
                        "--sweep", "pressure=1e-10:1e-9:2,log", "--format", "csv")
    assert code == 0
    assert "diverges" in out
    # json keeps numbers and flags
    code, out = run_cli(capsys, "cavity", "--scenario", "kiesel",
                        "--sweep", "pressure=1e-10:1e-9:2,log", "--format", "json")
    rows = json.loads(out)
    assert rows[0]["noise_dominated"] is True
    assert isinstance(rows[0]["n_gradient"], float)


def test_unknown_flag_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["cavity", "--scenario", "kiesel", "--no-such-flag"])
    assert exc.value.code == 2


def test_validation_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "particle": {"radius_nm": 170, "accommodation": 2.0},
        "cavity": {"length_mm": 11, "wavelength_nm": 1064,
                   "lev_linewidth_kHz": 180, "lev_power_W": 55}}))
    code, _ = run_cli(capsys, "temperature", "--scenario", str(bad))
    assert code == 3


def test_numerical_error_exit_code(tmp_path, capsys):
    # absurd intracavity power: the power balance has no root below 5000 K
    hot = tmp_path / "hot.json"
    hot.write_text(json.dumps({
        "particle": {"radius_nm": 170},
        "cavity": {"length_mm": 11, "wavelength_nm": 1064,
                   "lev_linewidth_kHz": 180, "lev_power_W": 1e9}}))
    code, _ = run_cli(capsys, "temperature", "--scenario", str(hot))
    assert code == 4


def test_missing_scenario_exit_code(capsys):
    code, _ = run_cli(capsys, "temperature", "--scenario", "no-such-scenario")
    assert code == 3


def test_coeffs_and_temperature_formats(capsys):
    code, out = run_cli(capsys, "coeffs", "--scenario", "gieseler")
    assert code == 0
    row = json.loads(out)
    assert row["setup"] == "lens" and row["rp_z_N_per_W"] > 0
    code, out = run_cli(capsys, "temperature", "--scenario", "kiesel",
                        "--format", "table")
    assert code == 0
    assert "t_particle_K" in out and "p_heat_W" in out


def test_feedback_budget_schema(capsys):
    code, out = run_cli(capsys, "feedback", "--scenario", "gieseler",
                        "--gain-z", "300")
    assert code == 0
    rows = json.loads(out)
    assert [r["axis"] for r in rows] == ["x", "y", "z"]
    expected_keys = {"axis", "omega_rad_s", "gain_rad_s", "n_thermal",
                     "n_gradient", "n_radiation", "n_shot", "n_total", "rms_m",
                     "mod_index", "c1", "gamma_rad_s", "t_particle_K", "t_eff_K",
                     "shift_rp_m", "shift_gravity_m", "detector_power_W"}
    assert set(rows[0]) == expected_keys
    z = rows[2]
    assert z["gain_rad_s"] == pytest.approx(2 * math.pi * 300.0)
    assert z["n_total"] == pytest.approx(
        z["c1"] * (z["n_thermal"] + z["n_gradient"] + z["n_radiation"])
        + z["n_shot"], rel=1e-12)


def test_psd_csv(capsys):
    code, out = run_cli(capsys, "psd", "--scenario", "kiesel", "--points", "11")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "omega_rad_s,value,kind"
    kinds = {line.rsplit(",", 1)[1] for line in lines[1:]}
    assert kinds == {"thermal_force", "lorentzian_power", "position_doublet"}
    assert len(lines) == 1 + 3 * 11


def test_optimize_sweep_columns(capsys):
    code, out = run_cli(capsys, "optimize", "--scenario", "gieseler",
                        "--sweep", "pressure=1e-7:1e-5:3,log", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "pressure_mbar,gain_rad_s,n_total,rms_m,mod_index"
    assert len(lines) == 4


def test_simulate_seeded_byte_identical(capsys, tmp_path):
    args = ("simulate", "--scenario", "kiesel", "--mode", "thermal",
            "--ensemble", "2", "--seed", "7", "--duration", "2e-4")
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    code, _ = run_cli(capsys, *args, "--out", str(a))
    assert code == 0
    code, _ = run_cli(capsys, *args, "--out", str(b))
    assert code == 0
    assert a.read_bytes() == b.read_bytes()
    result = json.loads(a.read_text())
    assert result["backend"] in ("compiled", "python")
    assert result["rms_m"] > 0


def test_simulate_cold_damping_smoke(capsys):
    code, out = run_cli(capsys, "simulate", "--scenario", "gieseler",
                        "--mode", "cold_damping", "--gain", "3000",
                        "--ensemble", "2", "--duration", "5e-3", "--seed", "1")
    assert code == 0
    result = json.loads(out)
    assert result["aux_gain"] == pytest.approx(2 * math.pi * 3000.0)


def test_simulate_trajectory_dump(capsys, tmp_path):
    dump = tmp_path / "traj.csv"
    code, _ = run_cli(capsys, "simulate", "--scenario", "kiesel",
                      "--mode", "thermal", "--ensemble", "1", "--seed", "3",
                      "--duration", "2e-4", "--dt", "5e-9",
                      "--dump", str(dump))
    assert code == 0
    lines = dump.read_text().strip().splitlines()
    assert lines[0] == "t_s,z_m,v_m_s"
    assert len(lines) > 100
    t0, z0, v0 = (float(x) for x in lines[1].split(","))
    assert t0 > 0


def test_bad_sweep_spec(capsys):
    code, _ = run_cli(capsys, "cavity", "--scenario", "kiesel",
                      "--sweep", "power=1:2:3")
    assert code == 3
