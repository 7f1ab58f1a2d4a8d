"""Optical field profiles, trap-force coefficients and a finite-difference
force oracle.

Two geometries are supported: the standing-wave Gaussian mode of a confocal
symmetric Fabry-Perot resonator, and the travelling Gaussian beam behind a
lens. Force coefficients are linearized around the levitation point and
normalized per watt of (intracavity / laser output) power:

* cavity: F_grad,z = -grad_z * (z - z_m) * P_int, etc.
* lens:   F_grad,z = -grad_z * (z - focus) * P_L and F_rp,z = +rp_z * P_L.

Peak field normalizations are fixed by the mode energetics:
|E0|^2 = 8 P / (pi eps0 c w^2) at a cavity antinode (from U = eps0/2 |E0|^2
pi w^2 d / 4 and P = c U / d) and |E0|^2 = 4 P / (pi eps0 c w^2) at a beam
focus. With these, the finite-difference oracle on the raw profiles
reproduces every linearized coefficient.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .constants import C_LIGHT, EPSILON_0, HBAR
from .errors import StepSizeError, ValidationError
from .scenario import CavitySetup, LensSetup, Particle

TWO_PI = 2.0 * math.pi


def polarizability_real(particle: Particle, wavelength: float) -> float:
    """Real (dispersive) dipole polarizability 4 pi eps0 R^3 (eps-1)/(eps+2).

    Units C m^2/V. Independent of wavelength for the loss-less contrast
    model used here; the argument is kept for interface symmetry with
    :func:`polarizability_imag`.
    """
    del wavelength
    return 4.0 * math.pi * EPSILON_0 * particle.radius**3 * particle.polarizability_contrast


def polarizability_imag(particle: Particle, wavelength: float) -> float:
    """Imaginary (dissipative + radiation-reaction) polarizability.

    alpha_I = 12 pi eps0 R^3 [ eps_I/(eps_R+2)^2 + (2/9) a0^2 (k R)^3 ],
    which stays positive even for a loss-less sphere (the scattering term).
    """
    k = TWO_PI / wavelength
    a0 = particle.polarizability_contrast
    absorption = particle.eps_imag / (particle.eps_real + 2.0) ** 2
    scattering = (2.0 / 9.0) * a0**2 * (k * particle.radius) ** 3
    return 12.0 * math.pi * EPSILON_0 * particle.radius**3 * (absorption + scattering)


def cavity_profile(x: float, y: float, z: float, setup: CavitySetup) -> complex:
    """Dimensionless standing-wave profile of the confocal cavity mode.

    Normalized to 1 at the central antinode; valid in the paraxial region
    |x|, |y| << z_R.
    """
    k = setup.wavenumber
    z_r = setup.rayleigh_range
    w2 = setup.waist**2
    spread = 1.0 + (z / z_r) ** 2
    r2 = x * x + y * y
    envelope = math.exp(-r2 / (w2 * spread)) / math.sqrt(spread)
    if z != 0.0:
        curvature = 1j * k * r2 / (2.0 * z * (1.0 + (z_r / z) ** 2))
    else:
        curvature = 0.0
    axial = math.cos(k * z - math.atan(z / z_r))
    return envelope * cmath.exp(curvature) * axial


def beam_profile(x: float, y: float, z: float, setup: LensSetup) -> complex:
    """Dimensionless travelling-wave profile of the focused Gaussian beam."""
    k = setup.wavenumber
    z_r = setup.rayleigh_range
    w2 = setup.waist**2
    spread = 1.0 + (z / z_r) ** 2
    r2 = x * x + y * y
    envelope = math.exp(-r2 / (w2 * spread)) / math.sqrt(spread)
    if z != 0.0:
        curvature = 1j * k * r2 / (2.0 * z * (1.0 + (z_r / z) ** 2))
    else:
        curvature = 0.0
    phase = 1j * (k * z - math.atan(z / z_r))
    return envelope * cmath.exp(curvature + phase)


def cavity_peak_field_square(setup: CavitySetup, power: float) -> float:
    """|E0|^2 at the central antinode for a given intracavity power, (V/m)^2."""
    return 8.0 * power / (math.pi * EPSILON_0 * C_LIGHT * setup.waist**2)


def beam_peak_field_square(setup: LensSetup, power: float) -> float:
    """|E0|^2 at the focus for a given laser output power, (V/m)^2."""
    return 4.0 * power / (math.pi * EPSILON_0 * C_LIGHT * setup.waist**2)


def levitation_field_square(setup: CavitySetup | LensSetup, power: float) -> float:
    """|E|^2 at the levitation point (antinode at z_m, or the focus)."""
    if isinstance(setup, CavitySetup):
        bracket = 1.0 + (2.0 * setup.levitation_offset / setup.length) ** 2
        return cavity_peak_field_square(setup, power) / bracket
    return beam_peak_field_square(setup, power)


@dataclass(frozen=True)
class CavityCoefficients:
    """Linearized cavity trap coefficients at the levitation antinode z_m."""

    grad_z: float          # N m^-1 W^-1
    grad_x: float          # N m^-1 W^-1
    grad_y: float          # N m^-1 W^-1
    freq_pull_max: float   # max |d(delta omega)/dz|, rad s^-1 m^-1
    wavenumber: float      # rad/m
    rayleigh_range: float  # m

    def freq_pull_slope(self, z: float) -> float:
        """Local frequency pull G(z) = G_max sin(2 k z - 2 atan(z/z_R))."""
        return self.freq_pull_max * math.sin(
            2.0 * self.wavenumber * z - 2.0 * math.atan(z / self.rayleigh_range))


@dataclass(frozen=True)
class LensCoefficients:
    """Linearized beam trap coefficients at the focus."""

    grad_z: float   # N m^-1 W^-1
    grad_x: float   # N m^-1 W^-1
    grad_y: float   # N m^-1 W^-1
    rp_z: float     # radiation pressure per watt, N/W


def cavity_coefficients(particle: Particle, setup: CavitySetup) -> CavityCoefficients:
    """Gradient-force and frequency-pull coefficients of the cavity trap.

    The frequency-pull amplitude is tied to the axial gradient coefficient
    through the energetic identity

        hbar * 2 k * G_max * Nbar = grad_z * P * (eps+2)/(3 eps),

    with Nbar = P d / (hbar omega c); equivalently
    G_max = grad_z * (eps+2)/(3 eps) * c^2/(2 d). The near-unity factor is
    the internal-field correction separating the energy-shift route from
    the dipole-force route.
    """
    k = setup.wavenumber
    if not k * setup.length > 100.0:
        raise ValidationError(
            f"cavity coefficients require k*d > 100, got {k * setup.length:g}")
    alpha_r = polarizability_real(particle, setup.wavelength)
    bracket = 1.0 + (2.0 * setup.levitation_offset / setup.length) ** 2
    grad_z = 4.0 * k**3 * alpha_r / (math.pi * EPSILON_0 * C_LIGHT * setup.length * bracket)
    grad_x = 8.0 * k**2 * alpha_r / (
        math.pi * EPSILON_0 * C_LIGHT * setup.length**2 * bracket**2)
    near_unity = (particle.eps_real + 2.0) / (3.0 * particle.eps_real)
    g_max = grad_z * near_unity * C_LIGHT**2 / (2.0 * setup.length)
    return CavityCoefficients(
        grad_z=grad_z, grad_x=grad_x, grad_y=grad_x, freq_pull_max=g_max,
        wavenumber=k, rayleigh_range=setup.rayleigh_range)


def frequency_pull(particle: Particle, setup: CavitySetup, z: float) -> float:
    """Shift of the cavity resonance for a particle on axis at height z, rad/s.

    First-order perturbation of the mode with mode volume pi w^2 d / 4:
    delta omega = -omega (eps-1)/(2 eps) cos^2(kz - atan(z/z_R)) V_p /
    ([1+(z/z_R)^2] pi w^2 d/4), V_p the particle volume. Always <= 0 for
    eps > 1; its z derivative reproduces freq_pull_slope.
    """
    k = setup.wavenumber
    z_r = setup.rayleigh_range
    spread = 1.0 + (z / z_r) ** 2
    volume = (4.0 / 3.0) * math.pi * particle.radius**3
    mode_volume = math.pi * setup.waist**2 * setup.length / 4.0
    axial = math.cos(k * z - math.atan(z / z_r)) ** 2
    shift = (particle.eps_real - 1.0) / (2.0 * particle.eps_real)
    return -setup.optical_omega * shift * axial * volume / (spread * mode_volume)


def energetic_identity_residual(particle: Particle, setup: CavitySetup,
                                power: float = 1.0) -> float:
    """Relative residual of the energetic consistency identity (see
    :func:`cavity_coefficients`); flagged if it ever exceeds 1e-9."""
    coeffs = cavity_coefficients(particle, setup)
    n_photons = power * setup.length / (HBAR * setup.optical_omega * C_LIGHT)
    lhs = HBAR * 2.0 * setup.wavenumber * coeffs.freq_pull_max * n_photons
    rhs = coeffs.grad_z * power * (particle.eps_real + 2.0) / (3.0 * particle.eps_real)
    return abs(lhs - rhs) / rhs


def lens_coefficients(particle: Particle, setup: LensSetup) -> LensCoefficients:
    """Gradient-force and radiation-pressure coefficients of the beam trap."""
    k = setup.wavenumber
    na = setup.numerical_aperture
    alpha_r = polarizability_real(particle, setup.wavelength)
    alpha_i = polarizability_imag(particle, setup.wavelength)
    grad_z = na**6 * k**4 * alpha_r / (8.0 * math.pi * EPSILON_0 * C_LIGHT)
    grad_x = na**4 * k**4 * alpha_r / (4.0 * math.pi * EPSILON_0 * C_LIGHT)
    rp_z = na**2 * (1.0 - na**2 / 2.0) * k**3 * alpha_i / (
        2.0 * math.pi * EPSILON_0 * C_LIGHT)
    return LensCoefficients(grad_z=grad_z, grad_x=grad_x, grad_y=grad_x, rp_z=rp_z)


@dataclass(frozen=True)
class ForceSample:
    """EM force components from direct differentiation of a field profile."""

    gradient: float            # N
    radiation_pressure: float  # N

    @property
    def total(self) -> float:
        return self.gradient + self.radiation_pressure


def numeric_force_oracle(particle: Particle, profile, peak_field_square: float,
                         point, axis: int, wavelength: float,
                         step: float | None = None) -> ForceSample:
    """Central-difference evaluation of the dipole EM force on a profile.

    gradient          F_G = (alpha_R/4) d(E.E*)/dq
    radiation pressure F_RP = (-alpha_I/2) Im(E dE*/dq)

    with E = sqrt(peak_field_square) * profile(x, y, z) and q the chosen
    axis (0, 1, 2). The default step wavelength/2000 keeps the differencing
    error orders of magnitude below the 1e-3 linearization tolerance this
    oracle is used to certify.
    """
    h = wavelength / 2000.0 if step is None else step
    if h >= wavelength / 100.0:
        raise StepSizeError(
            f"finite-difference step {h:g} too large; need < wavelength/100")
    alpha_r = polarizability_real(particle, wavelength)
    alpha_i = polarizability_imag(particle, wavelength)

    plus = list(point)
    minus = list(point)
    plus[axis] += h
    minus[axis] -= h
    psi_p = profile(*plus)
    psi_m = profile(*minus)
    psi_0 = profile(*point)

    d_intensity = (abs(psi_p) ** 2 - abs(psi_m) ** 2) / (2.0 * h)
    d_psi_conj = (psi_p.conjugate() - psi_m.conjugate()) / (2.0 * h)

    gradient = (alpha_r / 4.0) * peak_field_square * d_intensity
    radiation = (-alpha_i / 2.0) * peak_field_square * (psi_0 * d_psi_conj).imag
    return ForceSample(gradient=gradient, radiation_pressure=radiation)
