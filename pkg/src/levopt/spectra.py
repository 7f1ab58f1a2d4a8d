"""Closed-form spectral kernels, phonon/variance conversions and numeric
convolution.

Convention: a spectral density is the Fourier transform of the stationary
autocorrelation of the (Hermitian) observable; kernels may be asymmetric in
angular frequency. Areas quoted below are integrals over omega, so variances
are area / 2 pi.

The intracavity-power kernel follows the printed formulas (flat
hbar w0 P_L for the laser *output*, Lorentzian P^2/N for the *intracavity*
power); the accompanying prose ordering of the two is ambiguous, the
formula symbols are taken as normative.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from scipy import integrate

from .constants import HBAR
from .errors import ConvergenceError, RegimeWarning
from .thermo import bose_occupancy, thermal_force_psd

TWO_PI = 2.0 * math.pi


def lorentzian(zeta: float, kappa: float) -> float:
    """L_kappa(zeta) = kappa / (zeta^2 + (kappa/2)^2); area 2 pi, peak 4/kappa."""
    if not kappa > 0.0:
        raise ValueError(f"kappa must be > 0, got {kappa!r}")
    return kappa / (zeta * zeta + 0.25 * kappa * kappa)


def zero_point_amplitude(mass: float, omega: float) -> float:
    """Ground-state rms length sqrt(hbar / (2 M w)), m."""
    return math.sqrt(HBAR / (2.0 * mass * omega))


def phonons_to_rms(n_phonons: float, mass: float, omega: float) -> float:
    """rms displacement z_zp sqrt(2 n + 1) of a mode with occupancy n."""
    if n_phonons < 0.0:
        raise ValueError(f"phonon number must be >= 0, got {n_phonons!r}")
    return zero_point_amplitude(mass, omega) * math.sqrt(2.0 * n_phonons + 1.0)


@dataclass(frozen=True)
class FlatKernel:
    """Frequency-independent PSD (laser output power shot noise)."""

    kind = "flat_shot_noise"
    level: float
    meta: dict = field(default_factory=dict, compare=False)

    def __call__(self, omega: float) -> float:
        return self.level

    def centers(self):
        return ()

    def width(self) -> float:
        return 0.0


@dataclass(frozen=True)
class LorentzianPowerKernel:
    """Cavity-filtered power PSD: magnitude * L_kappa(omega - center)."""

    kind = "lorentzian_power"
    magnitude: float   # P^2 / N for intracavity power noise
    kappa: float
    center: float = 0.0
    meta: dict = field(default_factory=dict, compare=False)

    def __call__(self, omega: float) -> float:
        return self.magnitude * lorentzian(omega - self.center, self.kappa)

    def centers(self):
        return (self.center,)

    def width(self) -> float:
        return self.kappa

    def area(self) -> float:
        return self.magnitude * TWO_PI


@dataclass(frozen=True)
class ThermalForceKernel:
    """Asymmetric quantum PSD of the gas thermal force."""

    kind = "thermal_force"
    mass: float
    gamma: float
    temperature: float
    meta: dict = field(default_factory=dict, compare=False)

    def __call__(self, omega: float) -> float:
        return float(thermal_force_psd(omega, self.mass, self.gamma, self.temperature))

    def centers(self):
        return (0.0,)

    def width(self) -> float:
        # classical knee: the PSD turns over at hbar w ~ k T
        from .constants import K_BOLTZMANN
        return K_BOLTZMANN * self.temperature / HBAR if self.temperature > 0 else 1.0


@dataclass(frozen=True)
class PositionDoubletKernel:
    """Thermal position PSD z_zp^2 n [L_G(w + w_z) + L_G(w - w_z)]."""

    kind = "position_doublet"
    z_zp: float
    n_occupancy: float
    gamma: float
    omega_z: float
    meta: dict = field(default_factory=dict, compare=False)

    def __call__(self, omega: float) -> float:
        amp = self.z_zp**2 * self.n_occupancy
        return amp * (lorentzian(omega + self.omega_z, self.gamma)
                      + lorentzian(omega - self.omega_z, self.gamma))

    def centers(self):
        return (-self.omega_z, self.omega_z)

    def width(self) -> float:
        return self.gamma

    def area(self) -> float:
        return self.z_zp**2 * self.n_occupancy * 2.0 * TWO_PI


SpectralKernel = FlatKernel | LorentzianPowerKernel | ThermalForceKernel | PositionDoubletKernel


def power_noise_psd(which: str, *, optical_omega: float, mean_power: float,
                    photon_number: float | None = None,
                    kappa: float | None = None,
                    center: float = 0.0) -> SpectralKernel:
    """Spectral kernel of the power seen by the particle.

    ``laser_output``: flat hbar w0 P_L (shot noise of a coherent beam).
    ``intracavity``: (P^2 / N) L_kappa(w - center); center is the
    drive-resonance offset, 0 for an on-resonance levitating field.

    Both assume a coherent-state drive, recorded in the kernel metadata.
    """
    meta = {"assumes_coherent_drive": True}
    if which == "laser_output":
        return FlatKernel(level=HBAR * optical_omega * mean_power, meta=meta)
    if which == "intracavity":
        if photon_number is None or kappa is None:
            raise ValueError("intracavity kernel needs photon_number and kappa")
        return LorentzianPowerKernel(magnitude=mean_power**2 / photon_number,
                                     kappa=kappa, center=center, meta=meta)
    raise ValueError(f"unknown power-noise kind {which!r}")


def position_psd(omega: float, mass: float, gamma: float, omega_z: float,
                 temperature: float) -> float:
    """Thermal position PSD of an underdamped oscillator at angular
    frequency omega (doublet approximation, valid for gamma << omega_z)."""
    return position_kernel(mass, gamma, omega_z, temperature)(omega)


def position_kernel(mass: float, gamma: float, omega_z: float,
                    temperature: float) -> PositionDoubletKernel:
    if gamma > omega_z / 10.0:
        warnings.warn(
            f"position doublet assumes gamma << omega_z (gamma/omega_z = "
            f"{gamma / omega_z:.2g}); the two-Lorentzian form is stretched",
            RegimeWarning, stacklevel=2)
    return PositionDoubletKernel(
        z_zp=zero_point_amplitude(mass, omega_z),
        n_occupancy=bose_occupancy(omega_z, temperature),
        gamma=gamma, omega_z=omega_z)


def _breakpoints(kernel, span: float, shift: float = 0.0, mirror: bool = False):
    """Geometric ladders of integration breakpoints around kernel features.

    A center c of ``kernel`` contributes points shift +/- (width * 4^k)
    around (c if not mirror else -c), laddered out to the overall
    integration span, so no quadrature piece covers more than a factor-4
    dynamic range of a Lorentzian tail.
    """
    pts = []
    w = kernel.width()
    if w <= 0.0:
        return pts
    for c in kernel.centers():
        base = shift - c if mirror else shift + c
        pts.append(base)
        step = w
        while step < 4.0 * span:
            pts.extend((base - step, base + step))
            step *= 4.0
    return pts


def convolve_psd(a: SpectralKernel, b: SpectralKernel, omega: float,
                 rtol: float = 1e-6) -> float:
    """(1/2pi) integral a(w') b(omega - w') dw' by piecewise adaptive
    quadrature.

    Operands are order-normalized first, so the convolution is exactly
    symmetric in (a, b). Integration windows are built from geometric
    breakpoint ladders around every kernel feature (widths can differ by
    many orders of magnitude); quadrature failure on any piece raises
    :class:`ConvergenceError`.
    """
    a, b = sorted((a, b), key=lambda k: (k.kind, repr(k)))

    def integrand(w):
        return a(w) * b(omega - w)

    widths = [k.width() for k in (a, b) if k.width() > 0.0]
    if not widths:
        raise ValueError("convolution of two flat kernels diverges")
    span = 2000.0 * max(widths)
    pts = _breakpoints(a, span) + _breakpoints(b, span, shift=omega, mirror=True)
    anchor = [c for c in a.centers()] + [omega - c for c in b.centers()]
    mid = sum(anchor) / len(anchor) if anchor else 0.0
    lo, hi = mid - span, mid + span
    edges = sorted({lo, hi, *[p for p in pts if lo < p < hi]})

    total = 0.0
    err = 0.0
    for left, right in zip(edges[:-1], edges[1:]):
        out = integrate.quad(integrand, left, right,
                             epsabs=0.0, epsrel=rtol, limit=200, full_output=1)
        piece, abserr = out[0], out[1]
        if not math.isfinite(piece):
            raise ConvergenceError(
                f"convolution quadrature diverged on [{left:g}, {right:g}]")
        total += piece
        err += abserr
    if not total > 0.0 or err > 10.0 * rtol * total:
        raise ConvergenceError(
            f"convolution quadrature error {err:g} exceeds tolerance "
            f"for value {total:g}")
    return total / TWO_PI
