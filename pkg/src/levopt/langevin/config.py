"""Simulation configuration and result records for the Langevin oracle."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError

SCHEMES = ("exact_ou", "semi_implicit")
DRIVE_MODES = ("joint", "staged")

# accuracy/validity bound on the step: dt <= DT_SAFETY / max(relevant rates)
DT_SAFETY = 0.01
# batches per trajectory for the batch-means standard error
MIN_BATCHES = 16
# stationary statistics want duration >= STATIONARY_FACTOR / Gamma_total
STATIONARY_FACTOR = 50.0


@dataclass(frozen=True)
class SimConfig:
    """Integrator settings.

    dt/duration default from the scenario rates when left as None:
    dt = 0.01/max(rates), duration = 50/Gamma_total. ``burn_in`` (seconds)
    defaults to a fifth of the duration and is excluded from statistics.
    """

    dt: float | None = None
    duration: float | None = None
    seed: int = 0
    ensemble: int = 16
    scheme: str = "exact_ou"
    drive_mode: str = "joint"     # parametric runs: joint vs staged integration
    burn_in: float | None = None
    n_batches: int = MIN_BATCHES  # per trajectory
    workers: int = 1

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValidationError(f"sim.scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.drive_mode not in DRIVE_MODES:
            raise ValidationError(
                f"sim.drive_mode must be one of {DRIVE_MODES}, got {self.drive_mode!r}")
        if self.ensemble < 1:
            raise ValidationError(f"sim.ensemble must be >= 1, got {self.ensemble!r}")
        if self.n_batches < 2:
            raise ValidationError(f"sim.n_batches must be >= 2, got {self.n_batches!r}")
        if self.workers < 1:
            raise ValidationError(f"sim.workers must be >= 1, got {self.workers!r}")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("sim.seed must fit in an unsigned 64-bit integer")
        for name in ("dt", "duration", "burn_in"):
            value = getattr(self, name)
            if value is not None and not value > 0.0:
                raise ValidationError(f"sim.{name} must be > 0, got {value!r}")


@dataclass(frozen=True)
class SimResult:
    """Stationary second-moment estimate with a batch-means standard error."""

    variance: float            # <q^2>, m^2
    std_error: float           # standard error of the variance estimate
    n_batches: int             # total batches entering the estimate
    n_effective: float         # ~ independent samples, ensemble*kept*Gamma_tot/2
    dt: float
    duration: float
    burn_in: float
    scheme: str
    seed: int
    ensemble: int
    backend: str
    aux: dict = field(default_factory=dict)      # named extra moments
    flags: tuple = ()
    trajectory: np.ndarray | None = None         # (n, 3) columns t, q, qdot

    @property
    def rms(self) -> float:
        return float(np.sqrt(self.variance))
