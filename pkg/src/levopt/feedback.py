"""Phonon budget of the lens trap with cold-damping feedback.

The detection model is a point-like photodetector in the far field that
sees one plane-wave component of the outgoing beam plus the particle's
scattered wave. Each axis gets its own detector; its photocurrent is
filtered so an axis budget only carries its own detector's shot noise.
Feedback modulates the laser power so the gradient-force change acts as a
velocity drag -M Gamma_FB qdot per axis.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .constants import G_STANDARD, HBAR
from .errors import NonUnimodalError, RegimeWarning, ValidationError
from .optics import lens_coefficients
from .scenario import DetectorLayout, FeedbackGains, LensSetup, Particle, Scenario
from .spectra import phonons_to_rms, zero_point_amplitude
from .thermo import BathConditions, bose_occupancy, scenario_bath

AXES = ("x", "y", "z")


def detector_geometry(wavelength: float, z0: float) -> DetectorLayout:
    """Sensitivity-optimal detector placement for a given on-axis distance.

    x0 = y0 = sqrt(area) = sqrt(lambda z0 / 45 pi) maximizes x0^2 * area
    within the plane-wave validity constraints; those are then satisfied by
    construction (1/45 < 1/20).
    """
    if z0 < 20.0 * wavelength * (1.0 - 1e-9):
        raise ValidationError(
            f"detector.z0 must be >= 20 wavelengths ({20 * wavelength:.3e} m), "
            f"got {z0:.3e} m")
    side = math.sqrt(wavelength * z0 / (45.0 * math.pi))
    return DetectorLayout(z0=z0, x0=side, y0=side, area=side**2)


def check_detector_layout(layout: DetectorLayout, wavelength: float) -> dict:
    """Validate plane-wave-validity constraints; returns the margins."""
    k0 = 2.0 * math.pi / wavelength
    if layout.z0 < 20.0 * wavelength * (1.0 - 1e-9):
        raise ValidationError(
            f"detector.z0 must be >= 20 wavelengths, got {layout.z0:.3e} m")
    bound = layout.z0 / (10.0 * k0)
    tol = 1.0 + 1e-9
    for name, off in (("x0", layout.x0), ("y0", layout.y0)):
        if off**2 > bound * tol:
            raise ValidationError(
                f"detector.{name}^2 must be <= z0/(10 k0) = {bound:.3e} m^2, "
                f"got {off**2:.3e} m^2")
    if layout.area > bound * tol:
        raise ValidationError(
            f"detector.area must be <= z0/(10 k0) = {bound:.3e} m^2, "
            f"got {layout.area:.3e} m^2")
    return {
        "z0_over_20lambda": layout.z0 / (20.0 * wavelength),
        "x0_constraint": layout.x0**2 / bound,
        "y0_constraint": layout.y0**2 / bound,
        "area_constraint": layout.area / bound,
    }


def detector_power(lens: LensSetup, layout: DetectorLayout) -> float:
    """Mean power on one photodetector, 2 z_R^2 S P_L / (pi Z0^2 w^2), W."""
    return (2.0 * lens.rayleigh_range**2 * layout.area * lens.laser_power
            / (math.pi * layout.z0**2 * lens.waist**2))


@dataclass(frozen=True)
class DetectorFieldGains:
    """Linear response of the far-field detector amplitude to displacement.

    The detected field is -(j/Z0) E_i [ref + gx x + gy y + gz z] with the
    particle displacement (x, y, z) from the levitation point; ref and the
    per-axis gains all carry meters. Scattered-term gains scale as the
    particle's scattering amplitude a0 k^3 R^3 (times geometry factors).
    """

    reference: float  # z_R of the beam, m
    gain_x: float     # dimensionless
    gain_y: float     # dimensionless
    gain_z: float     # dimensionless


def detector_field_gains(particle: Particle, lens: LensSetup,
                         layout: DetectorLayout) -> DetectorFieldGains:
    k0 = lens.wavenumber
    scatter = particle.polarizability_contrast * k0**2 * particle.radius**3
    return DetectorFieldGains(
        reference=lens.rayleigh_range,
        gain_x=scatter * k0 * layout.x0 / layout.z0,
        gain_y=scatter * k0 * layout.y0 / layout.z0,
        gain_z=scatter / lens.rayleigh_range,
    )


def feedback_trap_frequencies(particle: Particle, lens: LensSetup,
                              gamma: float | None = None) -> tuple[float, float, float]:
    """Per-axis trap frequencies sqrt(grad_axis * P_L / M), rad/s.

    Warns when the y/z splitting is not large against the damping rate,
    where the per-axis spectral separation assumption breaks.
    """
    coeffs = lens_coefficients(particle, lens)
    mass = particle.mass
    wx = math.sqrt(coeffs.grad_x * lens.laser_power / mass)
    wy = math.sqrt(coeffs.grad_y * lens.laser_power / mass)
    wz = math.sqrt(coeffs.grad_z * lens.laser_power / mass)
    if gamma is not None and abs(wy - wz) <= 10.0 * gamma:
        warnings.warn(
            "trap frequencies along y and z are not well separated against "
            f"the damping rate (|wy - wz| = {abs(wy - wz):.3g} <= 10 Gamma)",
            RegimeWarning, stacklevel=2)
    return wx, wy, wz


def equilibrium_shifts(particle: Particle, lens: LensSetup) -> tuple[float, float]:
    """Levitation-point shifts (z_rp, y_w), m.

    Radiation pressure pushes along the optical axis by rp_z / grad_z
    (power-independent); gravity sags the trap along -y by
    M g / (grad_y P_L).
    """
    if not lens.laser_power > 0.0:
        raise ValueError("equilibrium shifts need laser_power > 0")
    coeffs = lens_coefficients(particle, lens)
    z_rp = coeffs.rp_z / coeffs.grad_z
    y_w = particle.mass * G_STANDARD / (coeffs.grad_y * lens.laser_power)
    return z_rp, y_w


def quantum_noise_phonons(scenario: Scenario,
                          bath: BathConditions | None = None) -> dict[str, dict[str, float]]:
    """Laser-noise occupancies per axis in the open loop.

    For a flat (shot-noise-limited) laser power PSD:
        n_G  = grad^2 n_T hbar w0 P_L / (2 M^2 W^2 Gamma)   per axis,
        n_RP = rp_z^2 w0 P_L / (2 M W_z Gamma)              z axis only
    (the transverse axes see no appreciable radiation pressure).
    """
    lens = scenario.optics
    if not isinstance(lens, LensSetup):
        raise TypeError("quantum_noise_phonons needs a lens scenario")
    if bath is None:
        bath = scenario_bath(scenario)
    particle = scenario.particle
    mass = particle.mass
    coeffs = lens_coefficients(particle, lens)
    gamma = bath.gamma
    omega0 = lens.optical_omega
    power = lens.laser_power
    freqs = dict(zip(AXES, feedback_trap_frequencies(particle, lens, gamma)))
    grads = {"x": coeffs.grad_x, "y": coeffs.grad_y, "z": coeffs.grad_z}

    out: dict[str, dict[str, float]] = {}
    for axis in AXES:
        w = freqs[axis]
        n_t = bose_occupancy(w, bath.temperature_eff)
        n_g = grads[axis]**2 * n_t * HBAR * omega0 * power / (
            2.0 * mass**2 * w**2 * gamma)
        n_rp = (coeffs.rp_z**2 * omega0 * power / (2.0 * mass * w * gamma)
                if axis == "z" else 0.0)
        out[axis] = {"omega": w, "n_thermal": n_t, "n_gradient": n_g,
                     "n_radiation": n_rp}
    return out


def measurement_imprecision_psd(particle: Particle, lens: LensSetup,
                                layout: DetectorLayout, axis: str) -> float:
    """Shot-noise position-imprecision PSD of one detector, K^2 hbar w0 / P_d.

    Two-sided, m^2 s. K_z = z_R^2 / (2 a0 k0^2 R^3);
    K_x(y) = z_R Z0 / (2 a0 k0^3 R^3 X0(Y0)).
    """
    k0 = lens.wavenumber
    a0 = particle.polarizability_contrast
    z_r = lens.rayleigh_range
    r3 = particle.radius**3
    if axis == "z":
        k_len = z_r**2 / (2.0 * a0 * k0**2 * r3)
    elif axis == "x":
        k_len = z_r * layout.z0 / (2.0 * a0 * k0**3 * r3 * layout.x0)
    else:
        k_len = z_r * layout.z0 / (2.0 * a0 * k0**3 * r3 * layout.y0)
    p_d = detector_power(lens, layout)
    return k_len**2 * HBAR * lens.optical_omega / p_d


def shot_noise_phonons(scenario: Scenario, layout: DetectorLayout,
                       gains: FeedbackGains,
                       bath: BathConditions | None = None) -> dict[str, float]:
    """Occupancy injected by detector shot noise through the feedback force.

    n_axis = C_axis * K_axis^2 * hbar w0 / P_d with
    C_axis = (M Gamma_FB W)^2 / [2 M (Gamma + Gamma_FB) hbar W]; zero gain
    injects nothing. The y axis mirrors x with its own transverse offset.
    """
    lens = scenario.optics
    if not isinstance(lens, LensSetup):
        raise TypeError("shot_noise_phonons needs a lens scenario")
    if bath is None:
        bath = scenario_bath(scenario)
    check_detector_layout(layout, lens.wavelength)
    particle = scenario.particle
    mass = particle.mass
    gamma = bath.gamma
    freqs = dict(zip(AXES, feedback_trap_frequencies(particle, lens, gamma)))

    out = {}
    for axis in AXES:
        gain = getattr(gains, axis)
        if gain == 0.0:
            out[axis] = 0.0
            continue
        w = freqs[axis]
        c_fb = (mass * gain * w) ** 2 / (2.0 * mass * (gamma + gain) * HBAR * w)
        out[axis] = c_fb * measurement_imprecision_psd(particle, lens, layout, axis)
    return out


@dataclass(frozen=True)
class AxisBudget:
    """Per-axis closed-loop phonon decomposition."""

    omega: float        # rad/s
    gain: float         # Gamma_FB, rad/s
    n_thermal: float
    n_gradient: float
    n_radiation: float
    n_shot: float
    n_total: float      # C1 (n_T + n_G + n_RP) + n_shot
    rms: float          # m
    mod_index: float    # Gamma_FB / omega
    c1: float           # Gamma / (Gamma + Gamma_FB)


@dataclass(frozen=True)
class FeedbackBudget:
    axes: dict[str, AxisBudget]
    shift_rp: float       # m
    shift_gravity: float  # m
    detector_power: float # W (0 when no detector is configured)
    gamma: float          # rad/s
    t_particle: float     # K
    t_eff: float          # K


def total_phonons(scenario: Scenario, layout: DetectorLayout | None = None,
                  gains: FeedbackGains | None = None,
                  bath: BathConditions | None = None) -> FeedbackBudget:
    """Closed-loop budget for every axis.

    Zero gain reduces an axis to the open-loop sum n_T + n_G + n_RP.
    A detector layout is required whenever any gain is nonzero (the
    measurement back-action cannot be switched off).
    """
    lens = scenario.optics
    if not isinstance(lens, LensSetup):
        raise TypeError("total_phonons needs a lens scenario")
    if bath is None:
        bath = scenario_bath(scenario)
    if gains is None:
        gains = scenario.feedback_gains or FeedbackGains()
    if layout is None:
        layout = scenario.detector
    any_gain = any(getattr(gains, a) > 0.0 for a in AXES)
    if any_gain and layout is None:
        raise ValidationError("feedback gains require a detector layout")

    particle = scenario.particle
    mass = particle.mass
    gamma = bath.gamma
    quantum = quantum_noise_phonons(scenario, bath)
    shot = (shot_noise_phonons(scenario, layout, gains, bath)
            if layout is not None else {a: 0.0 for a in AXES})

    axes = {}
    for axis in AXES:
        q = quantum[axis]
        gain = getattr(gains, axis)
        c1 = gamma / (gamma + gain)
        n_open = q["n_thermal"] + q["n_gradient"] + q["n_radiation"]
        n_total = c1 * n_open + shot[axis]
        axes[axis] = AxisBudget(
            omega=q["omega"], gain=gain,
            n_thermal=q["n_thermal"], n_gradient=q["n_gradient"],
            n_radiation=q["n_radiation"], n_shot=shot[axis],
            n_total=n_total,
            rms=phonons_to_rms(n_total, mass, q["omega"]),
            mod_index=gain / q["omega"], c1=c1)

    z_rp, y_w = equilibrium_shifts(particle, lens)
    return FeedbackBudget(
        axes=axes, shift_rp=z_rp, shift_gravity=y_w,
        detector_power=detector_power(lens, layout) if layout is not None else 0.0,
        gamma=gamma, t_particle=bath.balance.t_particle,
        t_eff=bath.temperature_eff)


@dataclass(frozen=True)
class OptimumGain:
    gain: float        # rad/s
    n_total: float
    rms: float         # m
    mod_index: float


def optimize_feedback_gain(scenario: Scenario, layout: DetectorLayout,
                           axis: str = "z",
                           bath: BathConditions | None = None) -> OptimumGain:
    """Gain minimizing the closed-loop occupancy of one axis.

    Log-spaced coarse scan (64 points spanning nine decades below the trap
    frequency; residual suppression falls as 1/gain while injected shot
    noise grows as gain, so the optimum always lies in this window at the
    pressures where feedback is useful) followed by golden-section
    refinement to 1e-3 relative. A scan with multiple separated minima
    raises :class:`NonUnimodalError`.
    """
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    if bath is None:
        bath = scenario_bath(scenario)

    def occupancy(gain: float) -> float:
        gains = FeedbackGains(**{axis: gain})
        budget = total_phonons(scenario, layout, gains, bath)
        return budget.axes[axis].n_total

    omega = total_phonons(scenario, layout, FeedbackGains(), bath).axes[axis].omega
    grid = np.geomspace(1e-9 * omega, omega, 64)
    values = np.array([occupancy(g) for g in grid])

    interior = (values[1:-1] < values[:-2]) & (values[1:-1] <= values[2:])
    n_minima = int(np.count_nonzero(interior))
    if n_minima == 0:
        raise NonUnimodalError(
            "no interior minimum in the coarse gain scan; optimum sits at a "
            "scan boundary (gain window [1e-9, 1] x trap frequency)")
    if n_minima > 1:
        idx = np.flatnonzero(interior) + 1
        if np.any(np.diff(idx) > 1):  # plateaus are fine, separated dips are not
            raise NonUnimodalError(
                f"occupancy vs gain is not unimodal (minima at grid points {idx})")

    i = int(np.argmin(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    result = optimize.minimize_scalar(
        lambda lg: occupancy(math.exp(lg)),
        bracket=None, bounds=(math.log(lo), math.log(hi)),
        method="bounded", options={"xatol": 1e-4})  # 1e-4 in log = 1e-4 relative
    best = math.exp(result.x)
    gains = FeedbackGains(**{axis: best})
    budget = total_phonons(scenario, layout, gains, bath).axes[axis]
    return OptimumGain(gain=best, n_total=budget.n_total, rms=budget.rms,
                       mod_index=budget.mod_index)


def thermal_sensitivity(index_ref: float, index: float) -> float:
    """Feedback-circuit thermal-noise sensitivity factor (index_ref/index)^2.

    Halving the modulation index makes the loop four times more sensitive
    to circuit noise.
    """
    if not (index_ref > 0.0 and index > 0.0):
        raise ValueError("modulation indices must be > 0")
    return (index_ref / index) ** 2
