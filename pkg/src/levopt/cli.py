"""Command-line interface.

Subcommands: coeffs, temperature, psd, cavity, feedback, optimize,
simulate, reproduce. Every subcommand reads a scenario JSON document
(--scenario accepts a path or a bundled name: kiesel, gieseler), computes
in-process and emits JSON, CSV or an aligned table. All output is
deterministic; the only stochastic subcommand is `simulate`, which is
deterministic for a fixed --seed.

Exit codes: 0 success, 1 failed reproduction claims, 2 usage, 3 validation
error, 4 numerical error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from importlib import resources

import numpy as np

from . import cavity as cavity_mod
from . import feedback as feedback_mod
from .constants import MBAR_TO_PA
from .errors import ConfigError, LevoptError, NumericalError, ValidationError
from .langevin import SimConfig, simulate_cold_damping, simulate_parametric, simulate_thermal
from .optics import cavity_coefficients, lens_coefficients
from .reproduce import run_reproduction
from .scenario import CavitySetup, FeedbackGains, Scenario, load_scenario, load_scenario_file
from .spectra import position_kernel, power_noise_psd
from .thermo import scenario_bath

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------- emission

def _render(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit(rows, fmt: str) -> str:
    """Serialize rows (list of dicts, stable key order) as json/csv/table."""
    if isinstance(rows, dict):
        rows = [rows]
    if fmt == "json":
        return json.dumps(rows if len(rows) != 1 else rows[0], indent=2) + "\n"
    if not rows:
        return ""
    keys = list(rows[0])
    if fmt == "csv":
        lines = [",".join(keys)]
        for row in rows:
            lines.append(",".join(_render(row[k]) for k in keys))
        return "\n".join(lines) + "\n"
    if fmt == "table":
        cells = [[_render(row[k]) for k in keys] for row in rows]
        widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
        lines = ["  ".join(k.ljust(w) for k, w in zip(keys, widths))]
        for c in cells:
            lines.append("  ".join(v.ljust(w) for v, w in zip(c, widths)))
        return "\n".join(lines) + "\n"
    raise ConfigError(f"unknown format {fmt!r}")


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- loading

def _load(scenario_arg: str) -> Scenario:
    try:
        return load_scenario_file(scenario_arg)
    except FileNotFoundError:
        name = scenario_arg.removesuffix(".json")
        bundled = resources.files("levopt") / "scenarios" / f"{name}.json"
        if bundled.is_file():
            return load_scenario(bundled.read_text(encoding="utf-8"))
        raise ConfigError(
            f"scenario '{scenario_arg}' is neither a file nor a bundled name "
            "(kiesel, gieseler)") from None


def _parse_sweep(spec: str):
    """'pressure=<lo>:<hi>:<n>[,log]' -> array of pressures in mbar."""
    try:
        axis, rest = spec.split("=", 1)
        if axis != "pressure":
            raise ConfigError(f"only pressure sweeps are supported, got '{axis}'")
        log = rest.endswith(",log")
        if log:
            rest = rest[: -len(",log")]
        lo, hi, n = rest.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"malformed sweep '{spec}': {exc}") from exc
    if n < 1 or lo <= 0 or hi <= 0:
        raise ConfigError(f"sweep bounds must be positive with n >= 1, got '{spec}'")
    return np.geomspace(lo, hi, n) if log else np.linspace(lo, hi, n)


# ---------------------------------------------------------------- rows

def _cavity_row(scenario: Scenario, pressure_mbar: float) -> dict:
    s = scenario.with_pressure(pressure_mbar * MBAR_TO_PA)
    budget = cavity_mod.cooled_phonon_number(s)
    escape = cavity_mod.escape_assessment(budget, s.optics.wavelength)
    return {
        "pressure_mbar": pressure_mbar,
        "omega_z_rad_s": budget.omega_z,
        "gamma_rad_s": budget.gamma,
        "t_particle_K": budget.t_particle,
        "t_eff_K": budget.t_eff,
        "n_thermal": budget.n_thermal,
        "n_gradient": budget.n_gradient,
        "n_total": budget.n_total,
        "rms_thermal_m": budget.rms_thermal,
        "rms_gradient_m": budget.rms_gradient,
        "rms_total_m": escape.rms_total,
        "escaped": escape.escaped,
        "escape_margin": escape.margin,
        "noise_dominated": budget.noise_dominated,
        "noise_margin": budget.noise_margin,
        "gamma_om_rad_s": budget.gamma_om,
        "backaction_floor": budget.backaction_floor,
        "kappa_cool_over_omega_z": budget.kappa_ratio,
        "photons_lev": budget.photons_lev,
        "photons_cool": budget.photons_cool,
    }


def _mark_divergent(rows, fmt: str):
    """In csv/table output a diverging trap-noise value is a marker, not a
    number (JSON keeps the number next to its flag)."""
    if fmt == "json":
        return rows
    marked = []
    for row in rows:
        row = dict(row)
        if row.get("noise_dominated"):
            for key in ("n_gradient", "rms_gradient_m", "n_total", "rms_total_m"):
                if key in row:
                    row[key] = "diverges"
        marked.append(row)
    return marked


def _feedback_rows(scenario: Scenario, gains: FeedbackGains) -> list[dict]:
    budget = feedback_mod.total_phonons(scenario, gains=gains)
    rows = []
    for axis in ("x", "y", "z"):
        a = budget.axes[axis]
        rows.append({
            "axis": axis,
            "omega_rad_s": a.omega,
            "gain_rad_s": a.gain,
            "n_thermal": a.n_thermal,
            "n_gradient": a.n_gradient,
            "n_radiation": a.n_radiation,
            "n_shot": a.n_shot,
            "n_total": a.n_total,
            "rms_m": a.rms,
            "mod_index": a.mod_index,
            "c1": a.c1,
            "gamma_rad_s": budget.gamma,
            "t_particle_K": budget.t_particle,
            "t_eff_K": budget.t_eff,
            "shift_rp_m": budget.shift_rp,
            "shift_gravity_m": budget.shift_gravity,
            "detector_power_W": budget.detector_power,
        })
    return rows


# ---------------------------------------------------------------- commands

def _cmd_coeffs(args) -> int:
    scenario = _load(args.scenario)
    p = scenario.particle
    if isinstance(scenario.optics, CavitySetup):
        c = cavity_coefficients(p, scenario.optics)
        row = {
            "setup": "cavity",
            "grad_z_N_per_m_W": c.grad_z,
            "grad_x_N_per_m_W": c.grad_x,
            "grad_y_N_per_m_W": c.grad_y,
            "freq_pull_max_rad_s_per_m": c.freq_pull_max,
            "omega_z_rad_s": cavity_mod.trap_frequency(p, scenario.optics),
            "photons_lev": cavity_mod.intracavity_photons(
                scenario.optics.lev_power, scenario.optics.length,
                scenario.optics.wavelength),
        }
    else:
        c = lens_coefficients(p, scenario.optics)
        wx, wy, wz = feedback_mod.feedback_trap_frequencies(p, scenario.optics)
        shift_rp, shift_g = feedback_mod.equilibrium_shifts(p, scenario.optics)
        row = {
            "setup": "lens",
            "grad_z_N_per_m_W": c.grad_z,
            "grad_x_N_per_m_W": c.grad_x,
            "grad_y_N_per_m_W": c.grad_y,
            "rp_z_N_per_W": c.rp_z,
            "omega_x_rad_s": wx,
            "omega_y_rad_s": wy,
            "omega_z_rad_s": wz,
            "shift_rp_m": shift_rp,
            "shift_gravity_m": shift_g,
        }
    _write(emit(row, args.format), args.out)
    return 0


def _cmd_temperature(args) -> int:
    scenario = _load(args.scenario)
    bath = scenario_bath(scenario)
    row = {
        "t_particle_K": bath.balance.t_particle,
        "t_emerging_K": bath.balance.t_emerging,
        "t_eff_K": bath.temperature_eff,
        "gamma_impinging_rad_s": bath.drag.gamma_impinging,
        "gamma_emerging_rad_s": bath.drag.gamma_emerging,
        "gamma_rad_s": bath.gamma,
        "p_heat_W": bath.balance.p_heat,
        "p_conduction_W": bath.balance.p_conduction,
        "p_radiation_W": bath.balance.p_radiation,
        "residual_W": bath.balance.residual,
    }
    _write(emit(row, args.format), args.out)
    return 0


def _cmd_psd(args) -> int:
    scenario = _load(args.scenario)
    bath = scenario_bath(scenario)
    p = scenario.particle
    lo, hi, n = args.omega_min, args.omega_max, args.points
    omegas = np.linspace(lo, hi, n)

    if isinstance(scenario.optics, CavitySetup):
        omega_z = cavity_mod.trap_frequency(p, scenario.optics)
        photons = cavity_mod.intracavity_photons(
            scenario.optics.lev_power, scenario.optics.length,
            scenario.optics.wavelength)
        power_kernel = power_noise_psd(
            "intracavity", optical_omega=scenario.optics.optical_omega,
            mean_power=scenario.optics.lev_power, photon_number=photons,
            kappa=scenario.optics.lev_linewidth)
    else:
        omega_z = feedback_mod.feedback_trap_frequencies(p, scenario.optics)[2]
        power_kernel = power_noise_psd(
            "laser_output", optical_omega=scenario.optics.optical_omega,
            mean_power=scenario.optics.laser_power)
    motion_kernel = position_kernel(p.mass, bath.gamma, omega_z, bath.temperature_eff)

    from .thermo import thermal_force_psd
    rows = []
    for w in omegas:
        rows.append({"omega_rad_s": float(w),
                     "value": float(thermal_force_psd(w, p.mass, bath.gamma,
                                                      bath.temperature_eff)),
                     "kind": "thermal_force"})
    for w in omegas:
        rows.append({"omega_rad_s": float(w), "value": float(power_kernel(w)),
                     "kind": power_kernel.kind})
    for w in omegas:
        rows.append({"omega_rad_s": float(w), "value": float(motion_kernel(w)),
                     "kind": motion_kernel.kind})
    _write(emit(rows, args.format), args.out)
    return 0


def _cmd_cavity(args) -> int:
    scenario = _load(args.scenario)
    if not isinstance(scenario.optics, CavitySetup):
        raise ValidationError("`cavity` needs a cavity scenario")
    if args.sweep:
        pressures = _parse_sweep(args.sweep)
        rows = [_cavity_row(scenario, float(p)) for p in pressures]
    else:
        rows = [_cavity_row(scenario, scenario.gas.pressure / MBAR_TO_PA)]
    _write(emit(_mark_divergent(rows, args.format), args.format), args.out)
    return 0


def _cmd_feedback(args) -> int:
    scenario = _load(args.scenario)
    if isinstance(scenario.optics, CavitySetup):
        raise ValidationError("`feedback` needs a lens scenario")
    gains = FeedbackGains(x=args.gain_x * TWO_PI, y=args.gain_y * TWO_PI,
                          z=args.gain_z * TWO_PI)
    if not any((gains.x, gains.y, gains.z)) and scenario.feedback_gains:
        gains = scenario.feedback_gains
    rows = _feedback_rows(scenario, gains)
    _write(emit(rows, args.format), args.out)
    return 0


def _cmd_optimize(args) -> int:
    scenario = _load(args.scenario)
    if isinstance(scenario.optics, CavitySetup):
        raise ValidationError("`optimize` needs a lens scenario")
    layout = scenario.detector or feedback_mod.detector_geometry(
        scenario.optics.wavelength, 20.0 * scenario.optics.wavelength)
    pressures = (_parse_sweep(args.sweep) if args.sweep
                 else np.array([scenario.gas.pressure / MBAR_TO_PA]))
    rows = []
    for p_mbar in pressures:
        s = scenario.with_pressure(float(p_mbar) * MBAR_TO_PA)
        opt = feedback_mod.optimize_feedback_gain(s, layout, args.axis)
        rows.append({
            "pressure_mbar": float(p_mbar),
            "gain_rad_s": opt.gain,
            "n_total": opt.n_total,
            "rms_m": opt.rms,
            "mod_index": opt.mod_index,
        })
    _write(emit(rows, args.format), args.out)
    return 0


def _cmd_simulate(args) -> int:
    scenario = _load(args.scenario)
    config = SimConfig(
        dt=args.dt, duration=args.duration, seed=args.seed,
        ensemble=args.ensemble, scheme=args.scheme,
        drive_mode=args.drive_mode, workers=args.workers)
    record = 0
    if args.dump:
        record = max(1, int(round((args.duration or 1.0) / (args.dt or 1e-8) / 100000)))

    if args.mode == "thermal":
        result = simulate_thermal(scenario, config, backend=args.backend,
                                  record_every=record)
    elif args.mode == "parametric":
        result = simulate_parametric(scenario, config, backend=args.backend)
    else:
        layout = scenario.detector or feedback_mod.detector_geometry(
            scenario.optics.wavelength, 20.0 * scenario.optics.wavelength)
        result = simulate_cold_damping(scenario, layout, args.gain * TWO_PI,
                                       config, backend=args.backend,
                                       record_every=record)

    row = {
        "mode": args.mode,
        "variance_m2": result.variance,
        "rms_m": result.rms,
        "std_error_m2": result.std_error,
        "n_batches": result.n_batches,
        "n_effective": result.n_effective,
        "dt_s": result.dt,
        "duration_s": result.duration,
        "burn_in_s": result.burn_in,
        "scheme": result.scheme,
        "seed": result.seed,
        "ensemble": result.ensemble,
        "backend": result.backend,
        "flags": ";".join(result.flags),
    }
    for key, value in result.aux.items():
        row[f"aux_{key}"] = value
    _write(emit(row, args.format), args.out)

    if args.dump and result.trajectory is not None:
        lines = ["t_s,z_m,v_m_s"]
        for t, z, v in result.trajectory:
            lines.append(f"{float(t)!r},{float(z)!r},{float(v)!r}")
        with open(args.dump, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    return 0


def _cmd_reproduce(args) -> int:
    scenario = _load(args.scenario)
    name = args.scenario.rsplit("/", 1)[-1].removesuffix(".json")
    report = run_reproduction(scenario, name)
    _write(emit(report.rows(), args.format), args.out)
    return 0 if report.all_passed else 1


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levopt",
        description="Levitated-nanoparticle optomechanics: trap parameters, "
                    "temperatures, noise budgets and Langevin Monte Carlo.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scenario", required=True,
                       help="scenario JSON path or bundled name (kiesel, gieseler)")
        p.add_argument("--format", choices=("json", "csv", "table"), default="json")
        p.add_argument("--out", default=None, help="write output to a file")

    p = sub.add_parser("coeffs", help="trap-force coefficients")
    common(p)
    p.set_defaults(func=_cmd_coeffs)

    p = sub.add_parser("temperature", help="particle temperature balance and drag")
    common(p)
    p.set_defaults(func=_cmd_temperature)

    p = sub.add_parser("psd", help="sampled noise kernels as CSV")
    common(p)
    p.add_argument("--omega-min", type=float, default=-3e6)
    p.add_argument("--omega-max", type=float, default=3e6)
    p.add_argument("--points", type=int, default=301)
    p.set_defaults(func=_cmd_psd, format="csv")

    p = sub.add_parser("cavity", help="cavity phonon budget (single point or sweep)")
    common(p)
    p.add_argument("--sweep", help="pressure=<lo>:<hi>:<n>[,log] in mbar")
    p.set_defaults(func=_cmd_cavity)

    p = sub.add_parser("feedback", help="feedback phonon budget at given gains")
    common(p)
    p.add_argument("--gain-x", type=float, default=0.0, help="Hz (x 2 pi internally)")
    p.add_argument("--gain-y", type=float, default=0.0, help="Hz")
    p.add_argument("--gain-z", type=float, default=0.0, help="Hz")
    p.set_defaults(func=_cmd_feedback)

    p = sub.add_parser("optimize", help="optimal feedback gain (single point or sweep)")
    common(p)
    p.add_argument("--axis", choices=("x", "y", "z"), default="z")
    p.add_argument("--sweep", help="pressure=<lo>:<hi>:<n>[,log] in mbar")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("simulate", help="Langevin Monte Carlo")
    common(p)
    p.add_argument("--mode", choices=("thermal", "parametric", "cold_damping"),
                   default="thermal")
    p.add_argument("--dt", type=float, default=None, help="s")
    p.add_argument("--duration", type=float, default=None, help="s")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ensemble", type=int, default=16)
    p.add_argument("--scheme", choices=("exact_ou", "semi_implicit"),
                   default="exact_ou")
    p.add_argument("--drive-mode", choices=("joint", "staged"), default="joint")
    p.add_argument("--gain", type=float, default=0.0,
                   help="cold-damping gain in Hz (x 2 pi internally)")
    p.add_argument("--backend", choices=("auto", "compiled", "python"),
                   default="auto")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--dump", default=None,
                   help="write a decimated trajectory CSV (t, z, v)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("reproduce", help="reference-value reproduction report")
    common(p)
    p.set_defaults(func=_cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 4
    except LevoptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
