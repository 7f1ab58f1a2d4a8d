"""Cross-route consistency checks: finite-difference force oracle against
the linearized coefficients, and the numeric-convolution route against the
closed-form trap-noise occupancy.

These run in seconds and back both the `reproduce` report and the test
suite; everything here compares two independent computations of the same
quantity.
"""

from __future__ import annotations

import math

import numpy as np

from .cavity import intracavity_photons, levitation_noise_phonons, trap_frequency
from .optics import (
    beam_peak_field_square,
    beam_profile,
    cavity_coefficients,
    cavity_peak_field_square,
    cavity_profile,
    frequency_pull,
    lens_coefficients,
    numeric_force_oracle,
)
from .scenario import CavitySetup, LensSetup, Scenario
from .spectra import convolve_psd, position_kernel, power_noise_psd, zero_point_amplitude
from .thermo import scenario_bath


def nearest_antinode(setup: CavitySetup, z: float) -> float:
    """Axial position of the |profile| maximum closest to z.

    Fixed point of z = (q pi + atan(z/z_R)) / k; the arctangent varies on
    the Rayleigh scale so a few iterations converge to machine precision.
    """
    k = setup.wavenumber
    z_r = setup.rayleigh_range
    q = round((k * z - math.atan(z / z_r)) / math.pi)
    za = z
    for _ in range(8):
        za = (q * math.pi + math.atan(za / z_r)) / k
    return za


def fd_oracle_deviations(scenario: Scenario) -> dict[str, float]:
    """Relative deviation of every linearized coefficient from the
    finite-difference force oracle near the expansion point."""
    particle = scenario.particle
    setup = scenario.optics
    if isinstance(setup, CavitySetup):
        return _cavity_fd_deviations(particle, setup)
    return _lens_fd_deviations(particle, setup)


def _cavity_fd_deviations(particle, setup: CavitySetup) -> dict[str, float]:
    coeffs = cavity_coefficients(particle, setup)
    wavelength = setup.wavelength
    power = setup.lev_power if setup.lev_power > 0 else 1.0
    peak = cavity_peak_field_square(setup, power)
    za = nearest_antinode(setup, setup.levitation_offset)
    profile = lambda x, y, z: cavity_profile(x, y, z, setup)

    out = {}
    # axial gradient stiffness: F(za + d)/d -> -grad_z * P
    d = wavelength / 300.0
    force = numeric_force_oracle(particle, profile, peak, (0.0, 0.0, za + d), 2,
                                 wavelength).gradient
    out["grad_z"] = abs(force / (d * power) + coeffs.grad_z) / coeffs.grad_z
    # transverse stiffness at the antinode
    x = setup.waist / 100.0
    force = numeric_force_oracle(particle, profile, peak, (x, 0.0, za), 0,
                                 wavelength).gradient
    out["grad_x"] = abs(force / (x * power) + coeffs.grad_x) / coeffs.grad_x
    force = numeric_force_oracle(particle, profile, peak, (0.0, x, za), 1,
                                 wavelength).gradient
    out["grad_y"] = abs(force / (x * power) + coeffs.grad_y) / coeffs.grad_y

    # frequency-pull slope: numeric d(delta omega)/dz at za + d against the
    # linearization 2 k G_max (z - za)
    h = wavelength / 2000.0
    dpull = (frequency_pull(particle, setup, za + d + h)
             - frequency_pull(particle, setup, za + d - h)) / (2.0 * h)
    slope = 2.0 * setup.wavenumber * coeffs.freq_pull_max
    out["freq_pull_slope"] = abs(dpull / d - slope) / slope
    return out


def _lens_fd_deviations(particle, setup: LensSetup) -> dict[str, float]:
    coeffs = lens_coefficients(particle, setup)
    wavelength = setup.wavelength
    power = setup.laser_power if setup.laser_power > 0 else 1.0
    peak = beam_peak_field_square(setup, power)
    profile = lambda x, y, z: beam_profile(x, y, z, setup)

    out = {}
    d = setup.rayleigh_range / 100.0
    force = numeric_force_oracle(particle, profile, peak, (0.0, 0.0, d), 2,
                                 wavelength).gradient
    out["grad_z"] = abs(force / (d * power) + coeffs.grad_z) / coeffs.grad_z
    x = setup.waist / 100.0
    force = numeric_force_oracle(particle, profile, peak, (x, 0.0, 0.0), 0,
                                 wavelength).gradient
    out["grad_x"] = abs(force / (x * power) + coeffs.grad_x) / coeffs.grad_x
    force = numeric_force_oracle(particle, profile, peak, (0.0, x, 0.0), 1,
                                 wavelength).gradient
    out["grad_y"] = abs(force / (x * power) + coeffs.grad_y) / coeffs.grad_y
    force = numeric_force_oracle(particle, profile, peak, (0.0, 0.0, 0.0), 2,
                                 wavelength).radiation_pressure
    out["rp_z"] = abs(force / power - coeffs.rp_z) / coeffs.rp_z
    return out


def trap_noise_phonons_by_convolution(scenario: Scenario) -> tuple[float, float]:
    """Trap-noise occupancy via numeric convolution, with the closed form.

    The driven response has variance [S_F(+w) + S_F(-w)] / (4 M^2 w^2 G)
    with S_F the convolution of the intracavity-power kernel and the
    thermal position doublet scaled by grad_z^2. Returns
    (n_convolution, n_closed_form).
    """
    setup = scenario.optics
    if not isinstance(setup, CavitySetup):
        raise TypeError("convolution route needs a cavity scenario")
    particle = scenario.particle
    mass = particle.mass
    bath = scenario_bath(scenario)
    omega = trap_frequency(particle, setup)
    coeffs = cavity_coefficients(particle, setup)
    photons = intracavity_photons(setup.lev_power, setup.length, setup.wavelength)

    power_kernel = power_noise_psd(
        "intracavity", optical_omega=setup.optical_omega,
        mean_power=setup.lev_power, photon_number=photons,
        kappa=setup.lev_linewidth)
    motion_kernel = position_kernel(mass, bath.gamma, omega, bath.temperature_eff)

    s_plus = coeffs.grad_z**2 * convolve_psd(power_kernel, motion_kernel, omega)
    s_minus = coeffs.grad_z**2 * convolve_psd(power_kernel, motion_kernel, -omega)
    variance = (s_plus + s_minus) / (4.0 * mass**2 * omega**2 * bath.gamma)
    n_conv = variance / (2.0 * zero_point_amplitude(mass, omega) ** 2)

    n_closed, _, _ = levitation_noise_phonons(scenario, bath)
    return n_conv, n_closed


def trap_noise_gamma_product(scenario: Scenario, pressures_pa) -> np.ndarray:
    """n_gradient * Gamma across pressures (flat when the closed form's
    pressure-independence claim holds)."""
    values = []
    for p in pressures_pa:
        s = scenario.with_pressure(float(p))
        bath = scenario_bath(s)
        n_grad, _, _ = levitation_noise_phonons(s, bath)
        values.append(n_grad * bath.gamma)
    return np.asarray(values)
