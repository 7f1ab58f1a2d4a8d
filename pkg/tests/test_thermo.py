import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levopt.constants import HBAR, K_BOLTZMANN, MBAR_TO_PA, SIGMA_SB
from levopt.errors import NoRootError
from levopt.optics import levitation_field_square
from levopt.scenario import GasEnvironment, Particle
from levopt.thermo import (
    conductive_cooling_rate,
    epstein_drag,
    heating_rate,
    mean_molecular_speed,
    radiative_cooling_rate,
    scenario_bath,
    solve_particle_temperature,
    thermal_force_psd,
    thermal_force_psd_nonequilibrium,
)

mp.mp.dps = 40

AIR = GasEnvironment(pressure=100.0, temperature=293.0,
                     molecule_mass=4.81e-26, heat_capacity_ratio=1.4)
SILICA = Particle(170e-9, 2200.0, 2.1, 1e-5, 0.8)


# ------------------------------------------------------------ kinetic theory

def test_mean_speed_square_root_law():
    v1 = mean_molecular_speed(100.0, 4.81e-26)
    v4 = mean_molecular_speed(400.0, 4.81e-26)
    assert v4 == pytest.approx(2.0 * v1, rel=1e-12)


def test_mean_speed_room_air_high_precision():
    expected = float(mp.sqrt(8 * mp.mpf("1.380649e-23") * 293
                             / (mp.pi * mp.mpf("4.81e-26"))))
    assert mean_molecular_speed(293.0, 4.81e-26) == pytest.approx(expected, rel=1e-12)
    assert mean_molecular_speed(293.0, 4.81e-26) == pytest.approx(462.8, rel=1e-3)


def test_epstein_vacuum():
    vacuum = GasEnvironment(0.0, 293.0, 4.81e-26, 1.4)
    drag = epstein_drag(SILICA, vacuum, 293.0)
    assert drag.gamma == 0.0
    assert drag.temperature_eff == 293.0


def test_epstein_equilibrium_ratio_is_pi_over_8():
    # symbolic ratio (pi^2/6) / (4 pi/3) = pi/8 when the mean speeds match
    drag = epstein_drag(SILICA, AIR, AIR.temperature)
    assert drag.gamma_emerging / drag.gamma_impinging == pytest.approx(
        math.pi / 8.0, rel=1e-12)
    assert drag.temperature_eff == pytest.approx(AIR.temperature, rel=1e-12)


def test_epstein_linear_in_pressure():
    double = GasEnvironment(200.0, 293.0, 4.81e-26, 1.4)
    a = epstein_drag(SILICA, AIR, 600.0)
    b = epstein_drag(SILICA, double, 600.0)
    assert b.gamma_impinging == pytest.approx(2.0 * a.gamma_impinging, rel=1e-12)
    assert b.gamma_emerging == pytest.approx(2.0 * a.gamma_emerging, rel=1e-12)


@given(st.floats(min_value=100.0, max_value=3000.0),
       st.floats(min_value=1e-8, max_value=1e4))
@settings(max_examples=60, deadline=None)
def test_effective_temperature_bounded(surface_t, pressure):
    gas = GasEnvironment(pressure, 293.0, 4.81e-26, 1.4)
    drag = epstein_drag(SILICA, gas, surface_t)
    lo = min(293.0, surface_t)
    hi = max(293.0, surface_t)
    assert lo * (1 - 1e-12) <= drag.temperature_eff <= hi * (1 + 1e-12)


# ------------------------------------------------------------ thermal force

def test_thermal_psd_zero_temperature_one_sided():
    w = np.array([-2e6, -1.0, 0.0, 1.0, 2e6])
    s = thermal_force_psd(w, 1e-17, 10.0, 0.0)
    expected = 2.0 * 1e-17 * 10.0 * HBAR * np.abs(w) * (w > 0)
    assert np.allclose(s, expected, rtol=1e-12, atol=0.0)


def test_thermal_psd_classical_limit_symmetric():
    mass, gamma, t = 1e-17, 10.0, 293.0
    w = K_BOLTZMANN * t / (100.0 * HBAR)  # k_B T = 100 hbar w
    level = 2.0 * mass * gamma * K_BOLTZMANN * t
    assert thermal_force_psd(w, mass, gamma, t) == pytest.approx(level, rel=0.01)
    assert thermal_force_psd(-w, mass, gamma, t) == pytest.approx(level, rel=0.01)
    assert thermal_force_psd(0.0, mass, gamma, t) == pytest.approx(level, rel=1e-12)


def test_nonequilibrium_psd_reduces_to_equilibrium():
    drag = epstein_drag(SILICA, AIR, AIR.temperature)
    w = np.linspace(-5e6, 5e6, 401)
    total = thermal_force_psd_nonequilibrium(w, SILICA.mass, drag,
                                             AIR.temperature, AIR.temperature)
    expected = thermal_force_psd(w, SILICA.mass, drag.gamma, AIR.temperature)
    assert np.allclose(total, expected, rtol=1e-12)


# ------------------------------------------------------------ power balance

def test_heating_zero_loss():
    lossless = Particle(170e-9, 2200.0, 2.1, 0.0, 0.8)
    assert heating_rate(lossless, 1e13, 1.77e15) == 0.0


def test_heating_linear_in_intensity():
    a = heating_rate(SILICA, 1e13, 1.77e15)
    b = heating_rate(SILICA, 2e13, 1.77e15)
    assert b == pytest.approx(2.0 * a, rel=1e-12)


def test_conductive_trivial_zeroes():
    assert conductive_cooling_rate(SILICA, AIR, AIR.temperature) == 0.0
    no_accommodation = Particle(170e-9, 2200.0, 2.1, 1e-5, 0.0)
    assert conductive_cooling_rate(no_accommodation, AIR, 1000.0) == 0.0
    double = GasEnvironment(200.0, 293.0, 4.81e-26, 1.4)
    assert conductive_cooling_rate(SILICA, double, 1000.0) == pytest.approx(
        2.0 * conductive_cooling_rate(SILICA, AIR, 1000.0), rel=1e-12)


def test_radiative_trivial_and_quartic():
    assert radiative_cooling_rate(SILICA, 293.0, 293.0) == 0.0
    p = radiative_cooling_rate(SILICA, 586.0, 293.0)
    area = 4.0 * math.pi * (170e-9) ** 2
    assert p == pytest.approx(15.0 * area * SIGMA_SB * 293.0**4, rel=1e-12)


def test_radiative_high_precision():
    expected = float(4 * mp.pi * mp.mpf("170e-9") ** 2
                     * mp.mpf("5.670374419e-8") * (mp.mpf(1100) ** 4 - mp.mpf(293) ** 4))
    assert radiative_cooling_rate(SILICA, 1100.0, 293.0) == pytest.approx(
        expected, rel=1e-12)


def test_temperature_solution_lossless_is_ambient():
    lossless = Particle(170e-9, 2200.0, 2.1, 0.0, 0.8)
    balance = solve_particle_temperature(lossless, AIR, 1e13, 1.77e15)
    assert balance.t_particle == AIR.temperature
    assert balance.t_emerging == AIR.temperature


def test_temperature_solver_residual_bound(kiesel):
    bath = scenario_bath(kiesel)
    bal = bath.balance
    assert abs(bal.residual) <= max(1e-18, 1e-9 * bal.p_heat)
    assert bal.t_emerging == pytest.approx(
        293.0 + 0.8 * (bal.t_particle - 293.0), rel=1e-12)


def test_temperature_no_root_reports(kiesel):
    # absurdly strong field: balance unreachable below the ceiling
    field = levitation_field_square(kiesel.optics, kiesel.optics.lev_power) * 1e6
    with pytest.raises(NoRootError):
        solve_particle_temperature(kiesel.particle, kiesel.gas, field,
                                   kiesel.optics.optical_omega)


def test_temperature_monotone_and_saturates(kiesel, gieseler):
    for scenario in (kiesel, gieseler):
        pressures = np.geomspace(1e-5, 10.0, 13) * MBAR_TO_PA
        temps = [scenario_bath(scenario.with_pressure(p)).balance.t_particle
                 for p in pressures]
        assert all(a >= b - 1e-9 for a, b in zip(temps, temps[1:]))
        low = scenario_bath(scenario.with_pressure(1e-3 * MBAR_TO_PA))
        lower = scenario_bath(scenario.with_pressure(1e-4 * MBAR_TO_PA))
        assert abs(low.balance.t_particle - lower.balance.t_particle) < 1.0


def test_conduction_dominates_at_high_pressure(kiesel):
    bath = scenario_bath(kiesel.with_pressure(10.0 * MBAR_TO_PA))
    assert bath.balance.p_conduction > bath.balance.p_radiation
