import math

import numpy as np
import pytest
from scipy import integrate

from levopt.constants import HBAR, K_BOLTZMANN
from levopt.errors import RegimeWarning
from levopt.spectra import (
    FlatKernel,
    convolve_psd,
    lorentzian,
    phonons_to_rms,
    position_kernel,
    position_psd,
    power_noise_psd,
    zero_point_amplitude,
)
from levopt.thermo import bose_occupancy


def test_lorentzian_landmarks():
    kappa = 2.0 * math.pi * 180e3
    assert lorentzian(0.0, kappa) == pytest.approx(4.0 / kappa, rel=1e-12)
    assert lorentzian(kappa / 2.0, kappa) == pytest.approx(2.0 / kappa, rel=1e-12)


def _full_line_area(f, width):
    # piecewise, with u = 1/x substitution for the tails so QUADPACK never
    # evaluates the integrand at astronomically large arguments
    core, _ = integrate.quad(f, -20.0 * width, 20.0 * width,
                             points=[0.0], limit=200)
    tail = lambda u: (f(1.0 / u) + f(-1.0 / u)) / u**2
    tails, _ = integrate.quad(tail, 1e-12 / width, 1.0 / (20.0 * width), limit=200)
    return core + tails


def test_lorentzian_area_is_two_pi():
    kappa = 3.7e5
    area = _full_line_area(lambda z: lorentzian(z, kappa), kappa)
    assert area == pytest.approx(2.0 * math.pi, rel=1e-9)


def test_flat_power_kernel():
    kernel = power_noise_psd("laser_output", optical_omega=1.77e15, mean_power=0.1)
    expected = HBAR * 1.77e15 * 0.1
    for w in (0.0, -3e6, 5e8):
        assert kernel(w) == expected
    assert kernel.meta["assumes_coherent_drive"]


def test_intracavity_kernel_peak_and_area():
    kernel = power_noise_psd("intracavity", optical_omega=1.77e15,
                             mean_power=55.0, photon_number=1.08e10,
                             kappa=2.0 * math.pi * 180e3)
    magnitude = 55.0**2 / 1.08e10
    assert kernel(0.0) == pytest.approx(magnitude * 4.0 / kernel.kappa, rel=1e-12)
    area = _full_line_area(kernel, kernel.kappa)
    assert area == pytest.approx(2.0 * math.pi * magnitude, rel=1e-8)
    assert area == pytest.approx(kernel.area(), rel=1e-8)


def test_position_doublet_area():
    mass, gamma, omega_z, temp = 4.53e-17, 2.0e3, 1.21e6, 500.0
    kernel = position_kernel(mass, gamma, omega_z, temp)
    span = 60.0 * omega_z
    area, _ = integrate.quad(kernel, -span, span, limit=400,
                             points=[-omega_z, 0.0, omega_z])
    expected = 2.0 * zero_point_amplitude(mass, omega_z) ** 2 * bose_occupancy(
        omega_z, temp)
    assert area / (2.0 * math.pi) == pytest.approx(expected, rel=1e-3)


def test_position_psd_limits():
    mass, gamma, omega_z = 4.53e-17, 2.0e3, 1.21e6
    assert position_psd(omega_z, mass, gamma, omega_z, 1e-12) == pytest.approx(0.0)
    cold = position_kernel(mass, gamma, omega_z, 300.0)
    # peaks at +-omega_z
    assert cold(omega_z) > 10.0 * cold(0.5 * omega_z)
    assert cold(-omega_z) == pytest.approx(cold(omega_z), rel=1e-12)


def test_position_kernel_warns_when_overdamped():
    with pytest.warns(RegimeWarning):
        position_kernel(4.53e-17, 2e5, 1.21e6, 300.0)


def test_kernels_non_negative_grid():
    kernels = [
        power_noise_psd("laser_output", optical_omega=1.77e15, mean_power=0.1),
        power_noise_psd("intracavity", optical_omega=1.77e15, mean_power=55.0,
                        photon_number=1.08e10, kappa=1.13e6),
        position_kernel(4.53e-17, 2.0e3, 1.21e6, 500.0),
    ]
    grid = np.linspace(-5e6, 5e6, 101)
    for kernel in kernels:
        assert all(kernel(float(w)) >= 0.0 for w in grid)


def test_convolution_flat_times_doublet():
    flat = FlatKernel(level=3.3e-20)
    doublet = position_kernel(4.53e-17, 2.0e3, 1.21e6, 500.0)
    expected = flat.level * doublet.area() / (2.0 * math.pi)
    got = convolve_psd(flat, doublet, 0.7e6)
    assert got == pytest.approx(expected, rel=5e-3)


def test_convolution_exactly_symmetric():
    power = power_noise_psd("intracavity", optical_omega=1.77e15, mean_power=55.0,
                            photon_number=1.08e10, kappa=1.13e6)
    doublet = position_kernel(4.53e-17, 20.0, 1.21e6, 500.0)
    w = 1.21e6
    assert convolve_psd(power, doublet, w) == convolve_psd(doublet, power, w)


def test_convolution_reproduces_trap_noise_bracket():
    # delta-narrow doublet picks the power kernel at 0 and 2 omega_z
    kappa = 1.13e6
    omega_z = 1.21e6
    mass, gamma, temp = 4.53e-17, 0.05, 500.0
    power = power_noise_psd("intracavity", optical_omega=1.77e15, mean_power=55.0,
                            photon_number=1.08e10, kappa=kappa)
    doublet = position_kernel(mass, gamma, omega_z, temp)
    amp = zero_point_amplitude(mass, omega_z) ** 2 * bose_occupancy(omega_z, temp)
    magnitude = 55.0**2 / 1.08e10
    expected = amp * magnitude * (lorentzian(0.0, kappa)
                                  + lorentzian(2.0 * omega_z, kappa))
    got = convolve_psd(power, doublet, omega_z)
    assert got == pytest.approx(expected, rel=0.02)


def test_phonons_to_rms_ground_state():
    mass, omega = 4.53e-17, 1.21e6
    assert phonons_to_rms(0.0, mass, omega) == pytest.approx(
        zero_point_amplitude(mass, omega), rel=1e-12)
    with pytest.raises(ValueError):
        phonons_to_rms(-1.0, mass, omega)


def test_classical_occupancy_scale():
    omega, temp = 1.21e6, 500.0
    n = bose_occupancy(omega, temp)
    assert n == pytest.approx(K_BOLTZMANN * temp / (HBAR * omega), rel=1e-6)
