"""Reproduction report: reference values for the bundled scenarios.

Each claim recomputes one headline number of the modeled experiments from
scratch and checks it against its reference at a stated tolerance. The
claim set doubles as the quantitative half of the acceptance suite; all
claims are deterministic (the Monte Carlo cross-checks live in the test
suite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cavity import (
    cooled_phonon_number,
    escape_assessment,
    required_cooling_power,
    trap_frequency,
)
from .constants import MBAR_TO_PA
from .feedback import (
    FeedbackGains,
    detector_geometry,
    feedback_trap_frequencies,
    optimize_feedback_gain,
    quantum_noise_phonons,
    thermal_sensitivity,
    total_phonons,
)
from .optics import energetic_identity_residual
from .scenario import CavitySetup, Scenario
from .spectra import phonons_to_rms, zero_point_amplitude
from .thermo import scenario_bath
from .validation import (
    fd_oracle_deviations,
    trap_noise_gamma_product,
    trap_noise_phonons_by_convolution,
)

TWO_PI = 2.0 * math.pi
# pressure (Pa) at which "settled" quantities are evaluated
SETTLED_PRESSURE = 1e-3 * MBAR_TO_PA


@dataclass(frozen=True)
class Claim:
    claim_id: str
    description: str
    reference: float
    computed: float
    tolerance_kind: str   # rel | factor | bound | flag
    tolerance: float
    units: str

    @property
    def passed(self) -> bool:
        if self.tolerance_kind == "rel":
            return abs(self.computed - self.reference) <= self.tolerance * abs(self.reference)
        if self.tolerance_kind == "factor":
            lo = self.reference / self.tolerance
            hi = self.reference * self.tolerance
            return lo <= self.computed <= hi
        if self.tolerance_kind == "bound":
            return self.computed <= self.tolerance
        if self.tolerance_kind == "flag":
            return bool(self.computed) == bool(self.reference)
        raise ValueError(f"unknown tolerance kind {self.tolerance_kind!r}")

    def as_row(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "description": self.description,
            "reference": self.reference,
            "computed": self.computed,
            "tolerance_kind": self.tolerance_kind,
            "tolerance": self.tolerance,
            "units": self.units,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class ReproductionReport:
    scenario_name: str
    claims: tuple[Claim, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def rows(self) -> list[dict]:
        return [c.as_row() for c in self.claims]


def run_reproduction(scenario: Scenario, name: str = "scenario") -> ReproductionReport:
    if isinstance(scenario.optics, CavitySetup):
        claims = _cavity_claims(scenario)
    else:
        claims = _lens_claims(scenario)
    return ReproductionReport(scenario_name=name, claims=tuple(claims))


def _cavity_claims(scenario: Scenario) -> list[Claim]:
    settled = scenario.with_pressure(SETTLED_PRESSURE)
    bath = scenario_bath(settled)
    omega = trap_frequency(scenario.particle, scenario.optics)
    budget = cooled_phonon_number(settled, bath)

    claims = [
        Claim("trap-frequency", "axial trap frequency",
              TWO_PI * 203e3, omega, "rel", 0.05, "rad/s"),
        Claim("settled-temperature", "particle surface temperature, settled regime",
              1100.0, bath.balance.t_particle, "rel", 0.15, "K"),
        Claim("thermal-rms", "thermal rms displacement, settled regime",
              11e-9, budget.rms_thermal, "rel", 0.10, "m"),
    ]

    deep = scenario.with_pressure(1e-10 * MBAR_TO_PA)
    deep_budget = cooled_phonon_number(deep)
    escape = escape_assessment(deep_budget, scenario.optics.wavelength)
    claims += [
        Claim("trap-noise-rms", "trap-noise rms displacement at 1e-10 mbar",
              240e-9, deep_budget.rms_gradient, "rel", 0.20, "m"),
        Claim("escape-flag", "escape predicted at 1e-10 mbar",
              1.0, float(escape.escaped), "flag", 0.0, ""),
    ]

    quantum_target = 1.0
    p_mid = required_cooling_power(scenario.with_pressure(1e-7 * MBAR_TO_PA),
                                   quantum_target)
    p_low = required_cooling_power(scenario.with_pressure(1e-8 * MBAR_TO_PA),
                                   quantum_target)
    claims += [
        Claim("cooling-power-1e-7-mbar", "intracavity cooling power for n_z = 1",
              3.0, p_mid, "factor", 2.0, "W"),
        Claim("cooling-power-below-1e-7-mbar", "cooling power floor below 1e-7 mbar",
              1.0, p_low, "factor", 2.0, "W"),
    ]

    claims.append(Claim(
        "force-oracle", "worst finite-difference vs linearized coefficient deviation",
        1e-3, max(fd_oracle_deviations(scenario).values()), "bound", 1e-3, "relative"))
    claims.append(Claim(
        "energetic-identity", "frequency-pull vs dipole-force energetic identity residual",
        1e-12, energetic_identity_residual(scenario.particle, scenario.optics),
        "bound", 1e-12, "relative"))

    devs = []
    for p_mbar in (1e-8, 1e-6, 1e-4):
        n_conv, n_closed = trap_noise_phonons_by_convolution(
            scenario.with_pressure(p_mbar * MBAR_TO_PA))
        devs.append(abs(n_conv - n_closed) / n_closed)
    claims.append(Claim(
        "convolution-route", "numeric convolution vs closed-form trap-noise occupancy",
        0.02, max(devs), "bound", 0.02, "relative"))

    pressures = np.geomspace(1e-10, 1e-4, 7) * MBAR_TO_PA
    product = trap_noise_gamma_product(scenario, pressures)
    flatness = float((product.max() - product.min()) / product.mean())
    claims.append(Claim(
        "trap-noise-pressure-independence",
        "spread of n_gradient * Gamma over 1e-10..1e-4 mbar",
        0.02, flatness, "bound", 0.02, "relative"))
    return claims


def _lens_claims(scenario: Scenario) -> list[Claim]:
    particle = scenario.particle
    lens = scenario.optics
    settled = scenario.with_pressure(SETTLED_PRESSURE)
    bath = scenario_bath(settled)
    omega = feedback_trap_frequencies(particle, lens)[2]
    mass = particle.mass
    budget = total_phonons(settled, bath=bath)

    claims = [
        Claim("trap-frequency", "axial trap frequency",
              TWO_PI * 208e3, omega, "rel", 0.05, "rad/s"),
        Claim("settled-temperature", "particle surface temperature, settled regime",
              1580.0, bath.balance.t_particle, "rel", 0.15, "K"),
        Claim("thermal-rms", "thermal rms displacement, settled regime",
              46e-9, phonons_to_rms(budget.axes["z"].n_thermal, mass, omega),
              "rel", 0.10, "m"),
    ]

    def laser_noise_rms(pressure_mbar: float) -> float:
        s = scenario.with_pressure(pressure_mbar * MBAR_TO_PA)
        q = quantum_noise_phonons(s)["z"]
        z_zp = zero_point_amplitude(mass, q["omega"])
        return z_zp * math.sqrt(2.0 * (q["n_gradient"] + q["n_radiation"]))

    claims += [
        Claim("laser-noise-rms-1e-6-mbar",
              "combined gradient + radiation-pressure rms at 1e-6 mbar",
              0.9e-9, laser_noise_rms(1e-6), "rel", 0.30, "m"),
        Claim("laser-noise-rms-1e-11-mbar",
              "combined gradient + radiation-pressure rms at 1e-11 mbar",
              0.3e-6, laser_noise_rms(1e-11), "rel", 0.30, "m"),
    ]

    layout = scenario.detector or detector_geometry(lens.wavelength,
                                                    20.0 * lens.wavelength)
    mid = scenario.with_pressure(1e-6 * MBAR_TO_PA)
    mid_budget = total_phonons(mid, layout, FeedbackGains(z=TWO_PI * 300.0))
    mid_opt = optimize_feedback_gain(mid, layout, "z")
    claims += [
        Claim("feedback-rms-1e-6-mbar",
              "closed-loop rms at 1e-6 mbar with gain 2 pi x 300 Hz",
              0.1e-9, mid_budget.axes["z"].rms, "factor", 2.0, "m"),
        Claim("optimum-gain-1e-6-mbar", "gain minimizing the occupancy at 1e-6 mbar",
              TWO_PI * 300.0, mid_opt.gain, "factor", 2.0, "rad/s"),
    ]

    deep = scenario.with_pressure(1e-11 * MBAR_TO_PA)
    deep_opt = optimize_feedback_gain(deep, layout, "z")
    claims += [
        Claim("floor-rms-1e-11-mbar", "optimum-gain rms floor at 1e-11 mbar",
              17e-12, deep_opt.rms, "factor", 2.0, "m"),
        Claim("floor-occupancy-1e-11-mbar", "optimum-gain occupancy at 1e-11 mbar",
              9.0, deep_opt.n_total, "factor", 2.0, ""),
        Claim("optimum-gain-1e-11-mbar", "optimum gain at 1e-11 mbar",
              TWO_PI * 4.0, deep_opt.gain, "factor", 2.0, "rad/s"),
    ]

    claims.append(Claim(
        "sensitivity-square-law",
        "circuit-noise sensitivity for a 100x modulation-index reduction",
        1e4, thermal_sensitivity(1.0, 1e-2), "rel", 1e-12, ""))
    claims.append(Claim(
        "force-oracle", "worst finite-difference vs linearized coefficient deviation",
        1e-3, max(fd_oracle_deviations(scenario).values()), "bound", 1e-3, "relative"))
    return claims
