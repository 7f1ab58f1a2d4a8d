"""Langevin Monte Carlo oracle for the closed-form noise budgets.

Classical stochastic integration of the trapped particle:

* thermal motion (white gas-bath force at the effective temperature),
* trap-noise response (motion driven by intracavity power fluctuations,
  modeled as an Ornstein-Uhlenbeck process matched to the Lorentzian
  power kernel: relaxation kappa/2, stationary variance P^2/N),
* cold damping (velocity feedback plus white measurement-noise force whose
  intensity is inverted from the shot-noise phonon formula).

Reproducibility: every trajectory owns a counter-based Philox stream keyed
by (seed, trajectory index); reductions run in trajectory order. Results
are therefore bit-identical for a given backend regardless of worker
count, and identical between the compiled and pure-Python backends.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from ..constants import HBAR, K_BOLTZMANN
from ..errors import RegimeWarning, StabilityError
from ..scenario import CavitySetup, DetectorLayout, LensSetup, Scenario
from ..thermo import BathConditions, scenario_bath
from . import get_kernels
from .config import DT_SAFETY, STATIONARY_FACTOR, SimConfig, SimResult

_CHUNK_STEPS = 1 << 20


def _philox(seed: int, traj: int) -> np.random.Philox:
    """Counter-based stream for one trajectory; key = (seed, traj index)."""
    return np.random.Philox(key=(int(seed) << 64) | int(traj))


def exact_transition(mass: float, omega: float, gamma: float,
                     temperature: float, dt: float):
    """Exact Gaussian transition of the damped thermal oscillator over dt.

    Returns (phi11, phi12, phi21, phi22, c11, c21, c22, b1, b2): the state
    propagator, the Cholesky factor of the per-step noise covariance
    Q = S_inf - Phi S_inf Phi^T (S_inf the stationary covariance
    diag(kT/M w^2, kT/M)), and the zero-order-hold drive weights
    A^-1 (Phi - 1) e_v. Exact for any dt in the underdamped regime.
    """
    if gamma >= 1.999 * omega:
        raise StabilityError(
            f"exact transition requires an underdamped oscillator; "
            f"gamma/omega = {gamma / omega:.3g}")
    w1 = math.sqrt(omega * omega - 0.25 * gamma * gamma)
    decay = math.exp(-0.5 * gamma * dt)
    cos_ = math.cos(w1 * dt)
    sin_ = math.sin(w1 * dt)
    phi11 = decay * (cos_ + 0.5 * gamma / w1 * sin_)
    phi12 = decay * sin_ / w1
    phi21 = -decay * omega * omega * sin_ / w1
    phi22 = decay * (cos_ - 0.5 * gamma / w1 * sin_)

    s_z = K_BOLTZMANN * temperature / (mass * omega * omega)
    s_v = K_BOLTZMANN * temperature / mass
    q11 = s_z - (phi11 * phi11 * s_z + phi12 * phi12 * s_v)
    q12 = -(phi11 * phi21 * s_z + phi12 * phi22 * s_v)
    q22 = s_v - (phi21 * phi21 * s_z + phi22 * phi22 * s_v)
    c11 = math.sqrt(max(q11, 0.0))
    c21 = q12 / c11 if c11 > 0.0 else 0.0
    c22 = math.sqrt(max(q22 - c21 * c21, 0.0))

    b1 = (-gamma * phi12 - (phi22 - 1.0)) / (omega * omega)
    b2 = phi12
    return phi11, phi12, phi21, phi22, c11, c21, c22, b1, b2


def _axis_mode(scenario: Scenario):
    """(mass, omega_z, bath) of the axial mode for either optical setup."""
    from ..cavity import trap_frequency
    from ..feedback import feedback_trap_frequencies

    bath = scenario_bath(scenario)
    particle = scenario.particle
    if isinstance(scenario.optics, CavitySetup):
        omega = trap_frequency(particle, scenario.optics)
    else:
        omega = feedback_trap_frequencies(particle, scenario.optics)[2]
    return particle.mass, omega, bath


def _resolve_grid(config: SimConfig, rates, gamma_total: float):
    """Concrete (dt, n_burn, steps_per_batch, flags) from config defaults."""
    limit = DT_SAFETY / max(rates)
    dt = limit if config.dt is None else config.dt
    if dt > limit * (1.0 + 1e-9):
        raise StabilityError(
            f"sim.dt = {dt:g} s violates dt <= {DT_SAFETY:g}/max(rates) = {limit:g} s")
    duration = config.duration
    if duration is None:
        if gamma_total <= 0.0:
            raise StabilityError(
                "sim.duration must be given explicitly for an undamped system")
        duration = STATIONARY_FACTOR / gamma_total
    flags = []
    if duration * gamma_total < STATIONARY_FACTOR * (1.0 - 1e-9):
        warnings.warn(
            f"duration {duration:g} s is below {STATIONARY_FACTOR:g}/Gamma_total; "
            "statistics may not be stationary", RegimeWarning, stacklevel=3)
        flags.append("short_duration")
    burn = duration / 5.0 if config.burn_in is None else config.burn_in
    n_burn = max(int(round(burn / dt)), 0)
    n_keep = max(int(round((duration - burn) / dt)), config.n_batches)
    steps_per_batch = -(-n_keep // config.n_batches)  # ceil division
    return dt, n_burn, steps_per_batch, flags


def _collect(config: SimConfig, run_one):
    """Run trajectories (optionally threaded) and stack per-batch sums.

    run_one(traj_index) -> array of shape (n_stats, n_batches); output
    ordering is by trajectory index, so the reduction is deterministic for
    any worker count.
    """
    results = [None] * config.ensemble
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            for i, res in zip(range(config.ensemble),
                              pool.map(run_one, range(config.ensemble))):
                results[i] = res
    else:
        for i in range(config.ensemble):
            results[i] = run_one(i)
    return np.concatenate(results, axis=1)  # (n_stats, ensemble * n_batches)


def _batch_stats(batch_means: np.ndarray) -> tuple[float, float]:
    est = float(np.mean(batch_means))
    if batch_means.size > 1:
        err = float(np.std(batch_means, ddof=1) / math.sqrt(batch_means.size))
    else:
        err = math.inf
    return est, err


def simulate_thermal(scenario: Scenario, config: SimConfig | None = None, *,
                     backend: str = "auto", record_every: int = 0) -> SimResult:
    """Stationary variance of the thermal motion along the optical axis.

    The classical white-noise bath at the drag-weighted effective
    temperature gives the equipartition value k_B T_eff / (M w_z^2), which
    the estimate is tested against.
    """
    config = config or SimConfig()
    mass, omega, bath = _axis_mode(scenario)
    return _run_thermal_like(
        config, mass, omega, bath.gamma, bath.temperature_eff,
        rates=(omega, bath.gamma), backend=backend, record_every=record_every,
        aux={"expected_variance": K_BOLTZMANN * bath.temperature_eff / (mass * omega**2)})


def _run_thermal_like(config: SimConfig, mass: float, omega: float,
                      gamma_total: float, noise_temperature: float, *,
                      rates, backend: str, record_every: int = 0,
                      aux: dict | None = None) -> SimResult:
    kernels, backend_name = get_kernels(backend)
    dt, n_burn, steps_per_batch, flags = _resolve_grid(config, rates, gamma_total)
    n_keep = steps_per_batch * config.n_batches
    n_total = n_burn + n_keep

    if config.scheme == "semi_implicit":
        sigma_step = math.sqrt(
            2.0 * gamma_total * K_BOLTZMANN * noise_temperature / mass * dt)
        args = (dt, omega * omega, gamma_total, sigma_step)
        kernel = kernels.thermal_semi_implicit
    else:
        phi = exact_transition(mass, omega, gamma_total, noise_temperature, dt)
        args = phi[:7]
        kernel = kernels.thermal_exact

    n_rec = (n_total // record_every) if record_every > 0 else 0
    rec_store = np.empty((2, n_rec)) if n_rec else None

    def run_one(traj: int) -> np.ndarray:
        state = np.zeros(2)
        batch = np.empty((1, config.n_batches))
        if traj == 0 and n_rec:
            rec_q, rec_v = rec_store[0], rec_store[1]
            every = record_every
        else:
            rec_q = rec_v = np.empty(0)
            every = 0
        kernel(_philox(config.seed, traj), state, n_burn, steps_per_batch,
               config.n_batches, *args, batch[0], every, rec_q, rec_v)
        return batch

    sums = _collect(config, run_one)
    variance, err = _batch_stats(sums[0] / steps_per_batch)

    trajectory = None
    if rec_store is not None:
        t = (np.arange(1, n_rec + 1) * record_every) * dt
        trajectory = np.column_stack([t, rec_store[0], rec_store[1]])

    kept = n_keep * dt
    return SimResult(
        variance=variance, std_error=err,
        n_batches=config.ensemble * config.n_batches,
        n_effective=config.ensemble * kept * gamma_total / 2.0,
        dt=dt, duration=n_total * dt, burn_in=n_burn * dt,
        scheme=config.scheme, seed=config.seed, ensemble=config.ensemble,
        backend=backend_name, aux=dict(aux or {}), flags=tuple(flags),
        trajectory=trajectory)


def simulate_parametric(scenario: Scenario, config: SimConfig | None = None, *,
                        backend: str = "auto") -> SimResult:
    """Variance of the trap-noise response for a cavity scenario.

    Integrates the thermal coordinate and an OU intracavity-power
    fluctuation jointly with the driven response coordinate (Eq.-of-motion
    drive: -(grad_z/M) * deltaP * z_thermal, zero-order-held per step).
    ``config.drive_mode`` picks joint co-integration or a staged
    pre-generated-path run; both consume the identical noise stream.
    """
    from ..cavity import intracavity_photons, levitation_noise_phonons
    from ..optics import cavity_coefficients
    from ..spectra import zero_point_amplitude

    if not isinstance(scenario.optics, CavitySetup):
        raise TypeError("simulate_parametric needs a cavity scenario")
    config = config or SimConfig()
    setup = scenario.optics
    bath = scenario_bath(scenario)
    particle = scenario.particle
    mass = particle.mass
    coeffs = cavity_coefficients(particle, setup)
    omega = math.sqrt(coeffs.grad_z * setup.lev_power / mass)
    gamma = bath.gamma

    kernels, backend_name = get_kernels(backend)
    rates = (omega, gamma, setup.lev_linewidth)
    dt, n_burn, steps_per_batch, flags = _resolve_grid(config, rates, gamma)
    n_keep = steps_per_batch * config.n_batches
    n_total = n_burn + n_keep

    photons = intracavity_photons(setup.lev_power, setup.length, setup.wavelength)
    sigma_stationary = setup.lev_power / math.sqrt(photons)
    a_p = math.exp(-0.5 * setup.lev_linewidth * dt)
    s_p = sigma_stationary * math.sqrt(max(1.0 - a_p * a_p, 0.0))
    drive_coef = -coeffs.grad_z / mass

    phi = exact_transition(mass, omega, gamma, bath.temperature_eff, dt)
    phi11, phi12, phi21, phi22, c11, c21, c22, b1, b2 = phi

    if config.scheme == "semi_implicit":
        sigma_step = math.sqrt(
            2.0 * gamma * K_BOLTZMANN * bath.temperature_eff / mass * dt)

        def run_one(traj: int) -> np.ndarray:
            state = np.zeros(5)
            batch = np.empty((3, config.n_batches))
            kernels.parametric_joint_semi(
                _philox(config.seed, traj), state, n_burn, steps_per_batch,
                config.n_batches, dt, omega * omega, gamma, sigma_step,
                a_p, s_p, drive_coef, batch[0], batch[1], batch[2])
            return batch
    elif config.drive_mode == "joint":
        def run_one(traj: int) -> np.ndarray:
            state = np.zeros(5)
            batch = np.empty((3, config.n_batches))
            kernels.parametric_joint_exact(
                _philox(config.seed, traj), state, n_burn, steps_per_batch,
                config.n_batches, phi11, phi12, phi21, phi22, c11, c21, c22,
                a_p, s_p, drive_coef, b1, b2, batch[0], batch[1], batch[2])
            return batch
    else:  # staged: pre-generate the bath path, then integrate the response
        def run_one(traj: int) -> np.ndarray:
            bitgen = _philox(config.seed, traj)
            bath_state = np.zeros(3)
            resp_state = np.zeros(2)
            batch = np.empty((3, config.n_batches))

            def segment(n_steps):
                zt = np.empty(n_steps + 1)
                dp = np.empty(n_steps + 1)
                kernels.bath_path_exact(bitgen, bath_state, n_steps,
                                        phi11, phi12, phi21, phi22,
                                        c11, c21, c22, a_p, s_p, zt, dp)
                return kernels.response_zoh(resp_state, zt, dp, n_steps,
                                            phi11, phi12, phi21, phi22,
                                            drive_coef, b1, b2)

            left = n_burn
            while left > 0:
                n = min(left, _CHUNK_STEPS)
                segment(n)
                left -= n
            for b in range(config.n_batches):
                acc = np.zeros(3)
                left = steps_per_batch
                while left > 0:
                    n = min(left, _CHUNK_STEPS)
                    acc += np.asarray(segment(n))
                    left -= n
                batch[:, b] = acc
            return batch

    sums = _collect(config, run_one)
    var_g, err_g = _batch_stats(sums[0] / steps_per_batch)
    cross, err_c = _batch_stats(sums[1] / steps_per_batch)
    var_t, err_t = _batch_stats(sums[2] / steps_per_batch)

    n_grad, dominated, margin = levitation_noise_phonons(scenario, bath)
    z_zp = zero_point_amplitude(mass, omega)
    expected = 2.0 * z_zp**2 * n_grad
    if dominated:
        flags.append("noise_dominated")
    if var_g > 0.09 * var_t:
        flags.append("perturbative_regime_stretched")

    kept = n_keep * dt
    return SimResult(
        variance=var_g, std_error=err_g,
        n_batches=config.ensemble * config.n_batches,
        n_effective=config.ensemble * kept * gamma / 2.0,
        dt=dt, duration=n_total * dt, burn_in=n_burn * dt,
        scheme=config.scheme, seed=config.seed, ensemble=config.ensemble,
        backend=backend_name,
        aux={"expected_variance": expected,
             "thermal_variance": var_t, "thermal_std_error": err_t,
             "cross_moment": cross, "cross_std_error": err_c,
             "noise_dominance_margin": margin},
        flags=tuple(flags))


def simulate_cold_damping(scenario: Scenario, layout: DetectorLayout,
                          gain: float, config: SimConfig | None = None, *,
                          backend: str = "auto", include_laser_noise: bool = True,
                          record_every: int = 0) -> SimResult:
    """Closed-loop variance under velocity feedback with measurement noise.

    The feedback force is -M Gamma_FB (zdot + eta) with white velocity
    noise eta inverted from the shot-noise phonon formula: position
    imprecision S_imp = K_z^2 hbar w0 / P_d gives an injected white force
    of PSD (M Gamma_FB w_z)^2 S_imp, independent of the total damping.
    The run maps onto a thermal oscillator with damping Gamma + Gamma_FB
    and a noise temperature summing gas, laser and measurement forces.
    """
    from ..feedback import (feedback_trap_frequencies, measurement_imprecision_psd,
                            quantum_noise_phonons)

    if not isinstance(scenario.optics, LensSetup):
        raise TypeError("simulate_cold_damping needs a lens scenario")
    if gain < 0.0:
        raise ValueError(f"gain must be >= 0, got {gain!r}")
    config = config or SimConfig()
    lens = scenario.optics
    bath = scenario_bath(scenario)
    particle = scenario.particle
    mass = particle.mass
    omega = feedback_trap_frequencies(particle, lens)[2]
    gamma = bath.gamma
    gamma_total = gamma + gain

    # white-force PSDs (two-sided): gas bath + laser noise (equivalent
    # white level reproducing the open-loop occupancies) + injected
    # measurement noise
    s_thermal = 2.0 * mass * gamma * K_BOLTZMANN * bath.temperature_eff
    s_laser = 0.0
    if include_laser_noise:
        q = quantum_noise_phonons(scenario, bath)["z"]
        s_laser = 2.0 * mass * omega * HBAR * gamma * (
            q["n_gradient"] + q["n_radiation"])
    s_inject = 0.0
    if gain > 0.0:
        s_imp = measurement_imprecision_psd(particle, lens, layout, "z")
        s_inject = (mass * gain * omega) ** 2 * s_imp
    noise_temperature = (s_thermal + s_laser + s_inject) / (
        2.0 * mass * gamma_total * K_BOLTZMANN)

    return _run_thermal_like(
        config, mass, omega, gamma_total, noise_temperature,
        rates=(omega, gamma_total), backend=backend, record_every=record_every,
        aux={"gain": gain, "gamma_gas": gamma,
             "force_psd_thermal": s_thermal, "force_psd_laser": s_laser,
             "force_psd_injected": s_inject,
             "expected_variance": (s_thermal + s_laser + s_inject)
             / (2.0 * mass**2 * gamma_total * omega**2)})


def empirical_optimum_gain(scenario: Scenario, layout: DetectorLayout,
                           gains, config: SimConfig | None = None, *,
                           backend: str = "auto"):
    """Scan cold-damping gains and return (best_gain, results list)."""
    results = []
    for i, gain in enumerate(gains):
        cfg = replace(config or SimConfig(), seed=(config.seed if config else 0) + i)
        results.append(simulate_cold_damping(scenario, layout, gain, cfg,
                                             backend=backend))
    best = min(range(len(results)), key=lambda i: results[i].variance)
    return gains[best], results
