import dataclasses
import math

import mpmath as mp
import numpy as np
import pytest

from levopt.cavity import (
    CavityBudget,
    cooled_phonon_number,
    escape_assessment,
    intracavity_photons,
    levitation_noise_phonons,
    optomechanical_damping,
    required_cooling_power,
    trap_frequency,
)
from levopt.constants import MBAR_TO_PA
from levopt.errors import InfeasibleTargetError, RegimeWarning
from levopt.scenario import Particle
from levopt.thermo import scenario_bath

mp.mp.dps = 40


def _with_cooling(scenario, power):
    optics = dataclasses.replace(scenario.optics, cool_power=power)
    return dataclasses.replace(scenario, optics=optics)


def test_trap_frequency_vanishes_without_power(kiesel):
    optics = dataclasses.replace(kiesel.optics, lev_power=0.0)
    assert trap_frequency(kiesel.particle, optics) == 0.0


def test_trap_frequency_radius_invariant(kiesel):
    # grad_z and the mass both scale as R^3 at fixed density
    reference = trap_frequency(kiesel.particle, kiesel.optics)
    for radius in (70e-9, 340e-9):
        p = Particle(radius, 2200.0, 2.1, 1e-5, 0.8)
        assert trap_frequency(p, kiesel.optics) == pytest.approx(reference, rel=1e-9)


def test_intracavity_photons_high_precision():
    hbar = mp.mpf("6.62607015e-34") / (2 * mp.pi)
    c = mp.mpf(299792458)
    omega = 2 * mp.pi * c / mp.mpf("1064e-9")
    expected = float(55 * mp.mpf("11e-3") / (hbar * omega * c))
    got = intracavity_photons(55.0, 11e-3, 1064e-9)
    assert got == pytest.approx(expected, rel=1e-9)
    assert got == pytest.approx(1.08e10, rel=1e-2)


def test_intracavity_photons_linear():
    base = intracavity_photons(55.0, 11e-3, 1064e-9)
    assert intracavity_photons(110.0, 11e-3, 1064e-9) == pytest.approx(
        2.0 * base, rel=1e-12)
    assert intracavity_photons(55.0, 22e-3, 1064e-9) == pytest.approx(
        2.0 * base, rel=1e-12)
    assert intracavity_photons(0.0, 11e-3, 1064e-9) == 0.0


def test_optomechanical_damping_trivial():
    assert optomechanical_damping(1e-12, 3e12, 1.1e6, 0.0) == 0.0
    one = optomechanical_damping(1e-12, 3e12, 1.1e6, 1e8)
    two = optomechanical_damping(1e-12, 3e12, 1.1e6, 2e8)
    assert two == pytest.approx(2.0 * one, rel=1e-12)


def test_optomechanical_damping_warns_unresolved():
    with pytest.warns(RegimeWarning):
        optomechanical_damping(1e-12, 3e12, 1.1e6, 1e8, omega_z=1.2e6)


def test_trap_noise_scales_inverse_drag(kiesel):
    lo = levitation_noise_phonons(kiesel.with_pressure(1e-6 * MBAR_TO_PA))[0]
    hi = levitation_noise_phonons(kiesel.with_pressure(1e-4 * MBAR_TO_PA))[0]
    assert lo / hi == pytest.approx(100.0, rel=5e-3)


@pytest.mark.filterwarnings("ignore::levopt.errors.RegimeWarning")
def test_budget_identity(kiesel):
    scenario = _with_cooling(kiesel.with_pressure(1e-7 * MBAR_TO_PA), 1.0)
    budget = cooled_phonon_number(scenario)
    rebuilt = budget.backaction_floor + (
        budget.n_thermal + budget.n_gradient) * budget.gamma / budget.gamma_om
    assert budget.n_total == pytest.approx(rebuilt, rel=1e-12)
    assert budget.backaction_floor == pytest.approx(
        (scenario.optics.cool_linewidth / (4.0 * budget.omega_z)) ** 2, rel=1e-12)


def test_budget_without_cooling_is_open_loop_sum(kiesel):
    budget = cooled_phonon_number(kiesel)
    assert budget.gamma_om == 0.0
    assert budget.n_total == pytest.approx(budget.n_thermal + budget.n_gradient,
                                           rel=1e-12)


def test_backaction_floor_value():
    # kappa_cool / omega_z = 0.4 gives the textbook floor of 0.01
    assert (0.4 / 4.0) ** 2 == pytest.approx(0.01, rel=1e-12)


@pytest.mark.filterwarnings("ignore::levopt.errors.RegimeWarning")
def test_required_power_round_trips(kiesel):
    scenario = kiesel.with_pressure(1e-7 * MBAR_TO_PA)
    bath = scenario_bath(scenario)
    power = required_cooling_power(scenario, 1.0, bath)
    budget = cooled_phonon_number(_with_cooling(scenario, power), bath)
    assert budget.n_total == pytest.approx(1.0, rel=1e-9)


def test_required_power_infeasible_target(kiesel):
    scenario = kiesel.with_pressure(1e-7 * MBAR_TO_PA)
    floor = cooled_phonon_number(scenario).backaction_floor
    with pytest.raises(InfeasibleTargetError):
        required_cooling_power(scenario, floor * 0.5)


def test_noise_dominance_flag_low_pressure(kiesel):
    deep = kiesel.with_pressure(1e-10 * MBAR_TO_PA)
    _, dominated, margin = levitation_noise_phonons(deep)
    assert dominated and margin > 1.0
    high = kiesel.with_pressure(1e-4 * MBAR_TO_PA)
    _, dominated, margin = levitation_noise_phonons(high)
    assert not dominated and margin < 1.0


def test_escape_margin_monotone_in_pressure(kiesel):
    pressures = np.geomspace(1e-10, 1e-4, 9) * MBAR_TO_PA
    margins = [escape_assessment(cooled_phonon_number(kiesel.with_pressure(p)),
                                 kiesel.optics.wavelength).margin
               for p in pressures]
    assert all(a >= b for a, b in zip(margins, margins[1:]))


def test_escape_zero_motion():
    budget = CavityBudget(
        omega_z=1e6, gamma_om=0.0, n_thermal=0.0, n_gradient=0.0, n_total=0.0,
        rms_thermal=0.0, rms_gradient=0.0, photons_lev=1.0, photons_cool=0.0,
        gamma=1.0, t_particle=293.0, t_eff=293.0, kappa_ratio=0.1,
        drag_ratio=math.inf, noise_dominated=False, noise_margin=0.0,
        backaction_floor=0.0)
    report = escape_assessment(budget, 1064e-9)
    assert not report.escaped and report.margin == 0.0
