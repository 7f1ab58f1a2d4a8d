"""Gas damping, thermal force noise and the particle temperature balance.

The drag model is the rarefied-gas (Epstein) one: separate contributions
from molecules impinging on the sphere and re-emitted from it. Out of
thermal equilibrium the re-emitted molecules leave at the accommodated
surface temperature, which is obtained from the power balance
P_heat = P_conduction + P_radiation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .constants import HBAR, K_BOLTZMANN, SIGMA_SB
from .errors import NoRootError
from .optics import levitation_field_square
from .scenario import GasEnvironment, Particle, Scenario

T_CEILING = 5000.0  # K, bisection ceiling; beyond this the sphere is gone anyway


def mean_molecular_speed(temperature: float, molecule_mass: float) -> float:
    """Mean thermal speed sqrt(8 k_B T / (pi m)), m/s."""
    if not temperature > 0.0:
        raise ValueError(f"temperature must be > 0, got {temperature!r}")
    return math.sqrt(8.0 * K_BOLTZMANN * temperature / (math.pi * molecule_mass))


@dataclass(frozen=True)
class DragState:
    """Epstein drag split into impinging/emerging contributions."""

    gamma_impinging: float  # rad/s
    gamma_emerging: float   # rad/s
    temperature_eff: float  # K, occupation-weighted bath temperature

    @property
    def gamma(self) -> float:
        return self.gamma_impinging + self.gamma_emerging


def epstein_drag(particle: Particle, gas: GasEnvironment,
                 surface_temperature: float) -> DragState:
    """Drag rates for a sphere in a rarefied gas.

    gamma_imp = 4 pi R^2 rho Vbar(T_ambient) / (3 M)
    gamma_em  = pi^2 R^2 rho Vbar(T_surface) / (6 M)

    The effective bath temperature weights the two reservoirs by their
    drag rates, (G_imp T_amb + G_em T_surf) / G, and reduces to the
    ambient temperature in equilibrium.
    """
    rho = gas.mass_density
    r2 = particle.radius**2
    mass = particle.mass
    v_imp = mean_molecular_speed(gas.temperature, gas.molecule_mass)
    v_em = mean_molecular_speed(surface_temperature, gas.molecule_mass)
    gamma_imp = 4.0 * math.pi * r2 * rho * v_imp / (3.0 * mass)
    gamma_em = math.pi**2 * r2 * rho * v_em / (6.0 * mass)
    total = gamma_imp + gamma_em
    if total > 0.0:
        t_eff = (gamma_imp * gas.temperature + gamma_em * surface_temperature) / total
    else:
        t_eff = gas.temperature
    return DragState(gamma_impinging=gamma_imp, gamma_emerging=gamma_em,
                     temperature_eff=t_eff)


def bose_occupancy(omega: float, temperature: float) -> float:
    """Thermal occupancy [exp(hbar w / k T) - 1]^-1 at angular frequency w."""
    if temperature <= 0.0:
        return 0.0
    x = HBAR * abs(omega) / (K_BOLTZMANN * temperature)
    if x > 700.0:  # exp overflow; occupancy is zero to double precision anyway
        return 0.0
    return 1.0 / math.expm1(x)


def thermal_force_psd(omega, mass: float, gamma: float, temperature: float):
    """Asymmetric quantum PSD of the thermal force, 2 M Gamma hbar |w| [step + N].

    Spectral densities follow the Fourier-transform-of-autocorrelation
    convention used throughout this package; the positive-frequency side
    carries the extra vacuum (step) term. Accepts scalars or arrays; the
    w -> 0 limit is the classical white level 2 M Gamma k_B T.
    """
    w = np.asarray(omega, dtype=float)
    out = np.empty_like(w)
    absw = np.abs(w)
    x = HBAR * absw / (K_BOLTZMANN * temperature) if temperature > 0.0 else None
    scale = 2.0 * mass * gamma
    if temperature > 0.0:
        with np.errstate(divide="ignore", over="ignore"):
            occ = np.where(absw > 0.0, 1.0 / np.expm1(np.where(absw > 0.0, x, 1.0)), 0.0)
        out = scale * HBAR * absw * ((w > 0.0) + occ)
        out = np.where(absw == 0.0, scale * K_BOLTZMANN * temperature, out)
    else:
        out = scale * HBAR * absw * (w > 0.0)
    return out if out.ndim else float(out)


def thermal_force_psd_nonequilibrium(omega, mass: float, drag: DragState,
                                     gas_temperature: float,
                                     surface_temperature: float):
    """Non-equilibrium thermal force PSD: impinging + emerging bath terms."""
    return (thermal_force_psd(omega, mass, drag.gamma_impinging, gas_temperature)
            + thermal_force_psd(omega, mass, drag.gamma_emerging, surface_temperature))


def heating_rate(particle: Particle, field_square: float, omega: float) -> float:
    """Absorbed optical power of the sphere in a field |E|^2, W.

    P = (4 pi R^3 / 3)(w eps0 eps_I / 2) |E_inside|^2 with the internal
    field reduced by 3/(eps+2).
    """
    from .constants import EPSILON_0
    volume = (4.0 / 3.0) * math.pi * particle.radius**3
    internal = 9.0 / (particle.eps_real + 2.0) ** 2
    return volume * omega * EPSILON_0 * particle.eps_imag / 2.0 * internal * field_square


def conductive_cooling_rate(particle: Particle, gas: GasEnvironment,
                            surface_temperature: float) -> float:
    """Net power carried away by gas molecules, W (negative if the gas heats)."""
    v_imp = mean_molecular_speed(gas.temperature, gas.molecule_mass)
    area = 4.0 * math.pi * particle.radius**2
    gamma_ratio = (gas.heat_capacity_ratio + 1.0) / (gas.heat_capacity_ratio - 1.0)
    flux = gas.pressure * v_imp / (8.0 * gas.temperature)
    return area * gamma_ratio * flux * particle.accommodation * (
        surface_temperature - gas.temperature)


def radiative_cooling_rate(particle: Particle, surface_temperature: float,
                           ambient_temperature: float, emissivity: float = 1.0) -> float:
    """Net thermal radiation 4 pi R^2 sigma eps (T^4 - T_amb^4), W."""
    area = 4.0 * math.pi * particle.radius**2
    return area * SIGMA_SB * emissivity * (
        surface_temperature**4 - ambient_temperature**4)


@dataclass(frozen=True)
class TemperatureBalance:
    """Solution of the particle power balance."""

    t_particle: float   # K
    t_emerging: float   # K, accommodated temperature of re-emitted molecules
    p_heat: float       # W
    p_conduction: float # W
    p_radiation: float  # W

    @property
    def residual(self) -> float:
        return self.p_heat - self.p_conduction - self.p_radiation


def solve_particle_temperature(particle: Particle, gas: GasEnvironment,
                               field_square: float, omega: float,
                               emissivity: float = 1.0) -> TemperatureBalance:
    """Surface temperature from P_heat = P_cond + P_rad, then the emerging
    molecule temperature T_em = T_amb + accommodation (T_p - T_amb).

    Bisection on [T_amb, 5000 K]; raises :class:`NoRootError` when the
    absorbed power exceeds the available cooling at the ceiling (the sphere
    would sublimate rather than settle).
    """
    p_heat = heating_rate(particle, field_square, omega)

    def imbalance(t):
        return (p_heat - conductive_cooling_rate(particle, gas, t)
                - radiative_cooling_rate(particle, t, gas.temperature, emissivity))

    if p_heat == 0.0:
        t_p = gas.temperature
    elif imbalance(T_CEILING) > 0.0:
        raise NoRootError(
            f"absorbed power {p_heat:.3e} W exceeds cooling capacity at "
            f"{T_CEILING:g} K; no steady-state temperature below the ceiling")
    else:
        # bisection for unconditional bracketing on the quartic-plus-linear
        # balance; iterate to float resolution so the residual invariant
        # (<= max(1e-18 W, 1e-9 P_heat)) holds with margin
        t_p = optimize.bisect(imbalance, gas.temperature, T_CEILING,
                              xtol=1e-9, rtol=8.9e-16, maxiter=200)

    t_em = gas.temperature + particle.accommodation * (t_p - gas.temperature)
    return TemperatureBalance(
        t_particle=t_p,
        t_emerging=t_em,
        p_heat=p_heat,
        p_conduction=conductive_cooling_rate(particle, gas, t_p),
        p_radiation=radiative_cooling_rate(particle, t_p, gas.temperature, emissivity),
    )


@dataclass(frozen=True)
class BathConditions:
    """Everything the noise budgets need to know about the gas bath."""

    balance: TemperatureBalance
    drag: DragState
    field_square: float  # |E|^2 at the levitation point, (V/m)^2
    optical_omega: float # rad/s

    @property
    def gamma(self) -> float:
        return self.drag.gamma

    @property
    def temperature_eff(self) -> float:
        return self.drag.temperature_eff


def scenario_bath(scenario: Scenario) -> BathConditions:
    """Temperature balance and drag for a scenario's levitating field.

    The heating intensity is evaluated at the levitation point (antinode at
    z_m for the cavity, including the axial mode envelope; the focus for
    the lens).
    """
    optics = scenario.optics
    if scenario.is_cavity:
        field_square = levitation_field_square(optics, optics.lev_power)
    else:
        field_square = levitation_field_square(optics, optics.laser_power)
    balance = solve_particle_temperature(
        scenario.particle, scenario.gas, field_square, optics.optical_omega)
    drag = epstein_drag(scenario.particle, scenario.gas, balance.t_emerging)
    return BathConditions(balance=balance, drag=drag,
                          field_square=field_square,
                          optical_omega=optics.optical_omega)
