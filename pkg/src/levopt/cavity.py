"""Phonon budget of the cavity-levitated system.

Pipeline for a scenario: levitating-field intensity -> particle temperature
-> non-equilibrium drag -> thermal occupancy; trap frequency and the
levitating-field quantum-noise occupancy from the linearized coefficients;
optionally sideband cooling by a second, red-detuned intracavity field.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .constants import C_LIGHT, HBAR
from .errors import InfeasibleTargetError, RegimeWarning
from .optics import cavity_coefficients
from .scenario import CavitySetup, Particle, Scenario
from .spectra import lorentzian, phonons_to_rms, zero_point_amplitude
from .thermo import BathConditions, bose_occupancy, scenario_bath


def trap_frequency(particle: Particle, setup: CavitySetup) -> float:
    """Axial trap frequency sqrt(grad_z * P_lev / M), rad/s."""
    coeffs = cavity_coefficients(particle, setup)
    return math.sqrt(coeffs.grad_z * setup.lev_power / particle.mass)


def intracavity_photons(power: float, length: float, wavelength: float) -> float:
    """Mean intracavity photon number N = P d / (hbar w c)."""
    if power < 0.0:
        raise ValueError(f"power must be >= 0, got {power!r}")
    omega = 2.0 * math.pi * C_LIGHT / wavelength
    return power * length / (HBAR * omega * C_LIGHT)


def optomechanical_damping(z_zp: float, freq_pull_cool: float, kappa_cool: float,
                           n_cool_photons: float, omega_z: float | None = None) -> float:
    """Sideband-cooling damping rate 4 z_zp^2 G^2 N / kappa, rad/s.

    The closed form assumes the resolved regime kappa << omega_z; a
    RegimeWarning is raised when kappa_cool > omega_z / 3.
    """
    if omega_z is not None and kappa_cool > omega_z / 3.0:
        warnings.warn(
            f"cooling linewidth is not small against the trap frequency "
            f"(kappa/omega = {kappa_cool / omega_z:.2f}); the damping formula "
            "assumes the resolved-sideband regime", RegimeWarning, stacklevel=2)
    return 4.0 * z_zp**2 * freq_pull_cool**2 * n_cool_photons / kappa_cool


def _noise_dominance_margin(grad_z: float, power: float, photons: float,
                            kappa: float, mass: float, omega_z: float,
                            gamma: float) -> float:
    """Parametric heating rate from levitating-power noise over the drag rate.

    Stiffness noise at 2 omega_z pumps energy at
    g = grad_z^2 S_P(2 w_z) / (4 M^2 w_z^2); when g exceeds the drag rate
    the trap-noise occupancy grows without bound and the Lorentzian-response
    budget below it underestimates the motion.
    """
    s_p = power**2 / photons * lorentzian(2.0 * omega_z, kappa)
    heating = grad_z**2 * s_p / (4.0 * mass**2 * omega_z**2)
    return heating / gamma if gamma > 0.0 else math.inf


def levitation_noise_phonons(scenario: Scenario,
                             bath: BathConditions | None = None):
    """Occupancy added by quantum power noise of the levitating field.

    n_G = grad_z^2 n_T [L_k(0) + L_k(2 w_z)] P^2 / (4 N M^2 w_z^2 Gamma).

    Scales as 1/Gamma: the quieter the gas, the worse the trap noise.
    Returns (n_G, noise_dominated, margin); ``noise_dominated`` is set when
    the implied parametric heating beats the drag (margin >= 1), where the
    stationary value no longer exists physically.
    """
    setup = scenario.optics
    if not isinstance(setup, CavitySetup):
        raise TypeError("levitation_noise_phonons needs a cavity scenario")
    if bath is None:
        bath = scenario_bath(scenario)
    particle = scenario.particle
    mass = particle.mass
    coeffs = cavity_coefficients(particle, setup)
    omega_z = math.sqrt(coeffs.grad_z * setup.lev_power / mass)
    photons = intracavity_photons(setup.lev_power, setup.length, setup.wavelength)
    n_thermal = bose_occupancy(omega_z, bath.temperature_eff)
    gamma = bath.gamma

    bracket = lorentzian(0.0, setup.lev_linewidth) + lorentzian(
        2.0 * omega_z, setup.lev_linewidth)
    n_grad = (coeffs.grad_z**2 * n_thermal * bracket * setup.lev_power**2
              / (4.0 * photons * mass**2 * omega_z**2 * gamma))
    margin = _noise_dominance_margin(
        coeffs.grad_z, setup.lev_power, photons, setup.lev_linewidth,
        mass, omega_z, gamma)
    return n_grad, margin >= 1.0, margin


@dataclass(frozen=True)
class CavityBudget:
    """Phonon-number decomposition of the axial motion."""

    omega_z: float            # rad/s
    gamma_om: float           # cooling damping rate, rad/s
    n_thermal: float          # gas-bath occupancy
    n_gradient: float         # levitating-field power-noise occupancy
    n_total: float            # cooled occupancy (or open-loop sum without cooling)
    rms_thermal: float        # m
    rms_gradient: float       # m
    photons_lev: float
    photons_cool: float
    gamma: float              # gas drag, rad/s
    t_particle: float         # K
    t_eff: float              # K
    kappa_ratio: float        # kappa_cool / omega_z
    drag_ratio: float         # gamma / gamma_om (inf without cooling)
    noise_dominated: bool
    noise_margin: float
    backaction_floor: float   # [kappa_cool / (4 omega_z)]^2

    @property
    def has_cooling(self) -> bool:
        return self.gamma_om > 0.0


def cooled_phonon_number(scenario: Scenario,
                         bath: BathConditions | None = None) -> CavityBudget:
    """Full axial budget; with a cooling field the net occupancy is

        n_z = [kappa_cool/(4 w_z)]^2 + (n_T + n_G) Gamma / Gamma_OM,

    and without one simply n_T + n_G."""
    setup = scenario.optics
    if not isinstance(setup, CavitySetup):
        raise TypeError("cooled_phonon_number needs a cavity scenario")
    if bath is None:
        bath = scenario_bath(scenario)
    particle = scenario.particle
    mass = particle.mass
    coeffs = cavity_coefficients(particle, setup)
    omega_z = math.sqrt(coeffs.grad_z * setup.lev_power / mass)
    z_zp = zero_point_amplitude(mass, omega_z)
    gamma = bath.gamma

    n_thermal = bose_occupancy(omega_z, bath.temperature_eff)
    n_grad, dominated, margin = levitation_noise_phonons(scenario, bath)

    photons_lev = intracavity_photons(setup.lev_power, setup.length, setup.wavelength)
    photons_cool = intracavity_photons(setup.cool_power, setup.length, setup.wavelength)

    if setup.cool_power > 0.0:
        # the cooling field's gradient force is locally maximum at the
        # levitation point, so its pull coefficient is the plateau value
        gamma_om = optomechanical_damping(
            z_zp, coeffs.freq_pull_max, setup.cool_linewidth, photons_cool, omega_z)
        if gamma > gamma_om / 10.0:
            warnings.warn(
                f"gas drag is not small against the cooling rate "
                f"(Gamma/Gamma_OM = {gamma / gamma_om:.2g})",
                RegimeWarning, stacklevel=2)
        floor = (setup.cool_linewidth / (4.0 * omega_z)) ** 2
        n_total = floor + (n_thermal + n_grad) * gamma / gamma_om
        drag_ratio = gamma / gamma_om
    else:
        gamma_om = 0.0
        floor = (setup.cool_linewidth / (4.0 * omega_z)) ** 2
        n_total = n_thermal + n_grad
        drag_ratio = math.inf

    return CavityBudget(
        omega_z=omega_z,
        gamma_om=gamma_om,
        n_thermal=n_thermal,
        n_gradient=n_grad,
        n_total=n_total,
        rms_thermal=phonons_to_rms(n_thermal, mass, omega_z),
        rms_gradient=z_zp * math.sqrt(2.0 * n_grad),
        photons_lev=photons_lev,
        photons_cool=photons_cool,
        gamma=gamma,
        t_particle=bath.balance.t_particle,
        t_eff=bath.temperature_eff,
        kappa_ratio=setup.cool_linewidth / omega_z,
        drag_ratio=drag_ratio,
        noise_dominated=dominated,
        noise_margin=margin,
        backaction_floor=floor,
    )


def required_cooling_power(scenario: Scenario, target_n: float,
                           bath: BathConditions | None = None) -> float:
    """Mean intracavity cooling power needed to reach a phonon target.

    Inverts the budget for Gamma_OM and then for the photon number; raises
    :class:`InfeasibleTargetError` when the target sits at or below the
    backaction floor [kappa_cool/(4 w_z)]^2.
    """
    setup = scenario.optics
    if not isinstance(setup, CavitySetup):
        raise TypeError("required_cooling_power needs a cavity scenario")
    if bath is None:
        bath = scenario_bath(scenario)
    particle = scenario.particle
    mass = particle.mass
    coeffs = cavity_coefficients(particle, setup)
    omega_z = math.sqrt(coeffs.grad_z * setup.lev_power / mass)
    z_zp = zero_point_amplitude(mass, omega_z)

    floor = (setup.cool_linewidth / (4.0 * omega_z)) ** 2
    if target_n <= floor:
        raise InfeasibleTargetError(
            f"target occupancy {target_n:g} is below the backaction floor {floor:g}")

    n_thermal = bose_occupancy(omega_z, bath.temperature_eff)
    n_grad, _, _ = levitation_noise_phonons(scenario, bath)
    gamma_om = (n_thermal + n_grad) * bath.gamma / (target_n - floor)
    photons = gamma_om * setup.cool_linewidth / (
        4.0 * z_zp**2 * coeffs.freq_pull_max**2)
    omega_opt = setup.optical_omega
    return photons * HBAR * omega_opt * C_LIGHT / setup.length


@dataclass(frozen=True)
class EscapeReport:
    escaped: bool
    margin: float      # rms / threshold
    rms_total: float   # m
    threshold: float   # m


def escape_assessment(budget: CavityBudget, wavelength: float) -> EscapeReport:
    """Escape heuristic: combined rms motion against lambda/8.

    Thermal and trap-noise displacements are uncorrelated, so their
    variances add. lambda/8 is where the harmonic expansion of the cos^2
    trap degrades badly; this is a heuristic bound, not a dynamical
    simulation.
    """
    rms = math.hypot(budget.rms_thermal, budget.rms_gradient)
    threshold = wavelength / 8.0
    return EscapeReport(escaped=rms > threshold, margin=rms / threshold,
                        rms_total=rms, threshold=threshold)
