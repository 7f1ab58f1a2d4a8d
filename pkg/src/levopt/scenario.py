"""Scenario records and the unit-suffixed JSON configuration loader.

Every field in a scenario document carries its unit in the key name
(``radius_nm``, ``pressure_mbar``, ``lev_power_W`` ...). The loader converts
everything to SI on ingestion; downstream modules only ever see SI floats.
Linewidths and feedback gains may be given either as angular rates
(``*_rad_s``) or as ordinary frequencies (``*_Hz``/``*_kHz``), the latter
being multiplied by 2*pi internally.

Unknown keys are rejected rather than ignored, so a typo cannot silently
fall back to a default. Keys named ``comment`` (or ending in ``_comment``)
are allowed anywhere and ignored.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Any

from .constants import ATOMIC_MASS, C_LIGHT, K_BOLTZMANN, MBAR_TO_PA
from .errors import ConfigError, UnknownKeyError, ValidationError

TWO_PI = 2.0 * math.pi

# fused-silica particle and room-air bath defaults; the trap-frequency
# reproduction checks pin mass_density and eps_real jointly
DEFAULT_MASS_DENSITY = 2200.0        # kg/m^3
DEFAULT_EPS_REAL = 2.1               # refractive index ~1.45 at 1064 nm
DEFAULT_EPS_IMAG = 1e-5
DEFAULT_ACCOMMODATION = 0.8
DEFAULT_GAS_TEMPERATURE = 293.0      # K
DEFAULT_MOLECULE_MASS = 4.81e-26     # kg, mean air molecule (28.97 u)
DEFAULT_HEAT_CAPACITY_RATIO = 1.4
DEFAULT_PRESSURE = 1e-3 * MBAR_TO_PA # Pa; deep in the settled-temperature regime

MIN_CAVITY_KD = 100.0                # paraxial standing-wave validity bound


def _positive(name: str, value: float) -> None:
    if not value > 0.0:
        raise ValidationError(f"{name} must be > 0, got {value!r}")


def _non_negative(name: str, value: float) -> None:
    if value < 0.0:
        raise ValidationError(f"{name} must be >= 0, got {value!r}")


@dataclass(frozen=True)
class Particle:
    """Levitated sphere: geometry and material response."""

    radius: float          # m
    mass_density: float    # kg/m^3
    eps_real: float        # real part of relative permittivity
    eps_imag: float        # imaginary part of relative permittivity
    accommodation: float   # thermal accommodation coefficient, [0, 1]

    def __post_init__(self):
        _positive("particle.radius", self.radius)
        _positive("particle.mass_density", self.mass_density)
        if not self.eps_real > 1.0:
            raise ValidationError(
                f"particle.eps_real must be > 1, got {self.eps_real!r}")
        _non_negative("particle.eps_imag", self.eps_imag)
        if not 0.0 <= self.accommodation <= 1.0:
            raise ValidationError(
                f"particle.accommodation must be within [0, 1], got {self.accommodation!r}")

    @property
    def mass(self) -> float:
        """Sphere mass (4/3) pi R^3 rho, kg."""
        return (4.0 / 3.0) * math.pi * self.radius**3 * self.mass_density

    @property
    def polarizability_contrast(self) -> float:
        """Clausius-Mossotti contrast (eps-1)/(eps+2), dimensionless."""
        return (self.eps_real - 1.0) / (self.eps_real + 2.0)


def particle_mass(particle: Particle) -> float:
    """Mass of the sphere in kg."""
    return particle.mass


@dataclass(frozen=True)
class GasEnvironment:
    """Ambient gas bath."""

    pressure: float             # Pa
    temperature: float          # K
    molecule_mass: float        # kg
    heat_capacity_ratio: float  # gamma, dimensionless

    def __post_init__(self):
        _non_negative("gas.pressure", self.pressure)
        _positive("gas.temperature", self.temperature)
        _positive("gas.molecule_mass", self.molecule_mass)
        if not self.heat_capacity_ratio > 1.0:
            raise ValidationError(
                f"gas.heat_capacity_ratio must be > 1, got {self.heat_capacity_ratio!r}")

    @property
    def mass_density(self) -> float:
        """Ideal-gas mass density m P / (k_B T), kg/m^3."""
        return self.molecule_mass * self.pressure / (K_BOLTZMANN * self.temperature)


@dataclass(frozen=True)
class CavitySetup:
    """Confocal symmetric Fabry-Perot trap: geometry and drive fields.

    Linewidths are angular (rad/s); powers are mean intracavity powers.
    The cooling field defaults to the levitating field's wavelength.
    """

    length: float              # d, m
    wavelength: float          # m
    levitation_offset: float   # z_m from resonator center, m
    lev_linewidth: float       # kappa of levitating mode, rad/s
    lev_power: float           # W
    cool_linewidth: float      # kappa of cooling mode, rad/s
    cool_power: float          # W

    def __post_init__(self):
        _positive("cavity.length", self.length)
        _positive("cavity.wavelength", self.wavelength)
        if not abs(self.levitation_offset) < self.length / 2.0:
            raise ValidationError(
                "cavity.levitation_offset must satisfy |z_m| < length/2, "
                f"got {self.levitation_offset!r}")
        _positive("cavity.lev_linewidth", self.lev_linewidth)
        _positive("cavity.cool_linewidth", self.cool_linewidth)
        _non_negative("cavity.lev_power", self.lev_power)
        _non_negative("cavity.cool_power", self.cool_power)
        if not self.wavenumber * self.length > MIN_CAVITY_KD:
            raise ValidationError(
                "cavity geometry outside the standing-wave validity regime: "
                f"requires k*d > {MIN_CAVITY_KD:g}, got {self.wavenumber * self.length:g}")

    @property
    def wavenumber(self) -> float:
        return TWO_PI / self.wavelength

    @property
    def rayleigh_range(self) -> float:
        """Confocal mode Rayleigh range d/2, m."""
        return self.length / 2.0

    @property
    def waist(self) -> float:
        """Minimum beam radius sqrt(d/k), m."""
        return math.sqrt(self.length / self.wavenumber)

    @property
    def optical_omega(self) -> float:
        """Optical angular frequency c*k, rad/s."""
        return C_LIGHT * self.wavenumber


@dataclass(frozen=True)
class LensSetup:
    """Single-beam gradient trap at the focus of a lens."""

    numerical_aperture: float
    wavelength: float          # m
    laser_power: float         # mean laser output power, W

    def __post_init__(self):
        if not 0.0 < self.numerical_aperture < 1.0:
            raise ValidationError(
                f"lens.numerical_aperture must be within (0, 1), got {self.numerical_aperture!r}")
        _positive("lens.wavelength", self.wavelength)
        _non_negative("lens.laser_power", self.laser_power)

    @property
    def wavenumber(self) -> float:
        return TWO_PI / self.wavelength

    @property
    def rayleigh_range(self) -> float:
        """2 / (NA^2 k), m."""
        return 2.0 / (self.numerical_aperture**2 * self.wavenumber)

    @property
    def waist(self) -> float:
        """Minimum beam radius 2 / (NA k), m."""
        return 2.0 / (self.numerical_aperture * self.wavenumber)

    @property
    def optical_omega(self) -> float:
        return C_LIGHT * self.wavenumber


@dataclass(frozen=True)
class DetectorLayout:
    """Point-like photodetector placement relative to the focal point.

    Plane-wave validity requires z0 >= 20 wavelengths and
    x0^2, y0^2 <= z0/(10 k0); checked against the lens wavelength in
    :func:`levopt.feedback.check_detector_layout`.
    """

    z0: float                  # on-axis distance, m
    x0: float                  # transverse offset of the x detector, m
    y0: float                  # transverse offset of the y detector, m
    area: float                # photodetector area, m^2
    efficiency: float = 1.0    # ideal detection assumed
    response_time: float = 0.0

    def __post_init__(self):
        _positive("detector.z0", self.z0)
        _non_negative("detector.x0", self.x0)
        _non_negative("detector.y0", self.y0)
        _positive("detector.area", self.area)


@dataclass(frozen=True)
class FeedbackGains:
    """Per-axis cold-damping gains, rad/s."""

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        for axis in ("x", "y", "z"):
            _non_negative(f"feedback_gains.{axis}", getattr(self, axis))


@dataclass(frozen=True)
class Scenario:
    """A complete system description: particle + gas + one optical setup."""

    particle: Particle
    gas: GasEnvironment
    optics: CavitySetup | LensSetup
    feedback_gains: FeedbackGains | None = None
    detector: DetectorLayout | None = None

    def __post_init__(self):
        if isinstance(self.optics, CavitySetup):
            if self.feedback_gains is not None or self.detector is not None:
                raise ValidationError(
                    "feedback_gains/detector are only valid with a lens setup")

    @property
    def is_cavity(self) -> bool:
        return isinstance(self.optics, CavitySetup)

    def with_pressure(self, pressure_pa: float) -> "Scenario":
        """Copy of the scenario at a different ambient pressure."""
        return replace(self, gas=replace(self.gas, pressure=pressure_pa))


# --------------------------------------------------------------------------
# configuration parsing

_LENGTH_UNITS = {"m": 1.0, "mm": 1e-3, "um": 1e-6, "nm": 1e-9}
_PRESSURE_UNITS = {"Pa": 1.0, "mbar": MBAR_TO_PA}
_POWER_UNITS = {"W": 1.0, "mW": 1e-3}
_MASS_UNITS = {"kg": 1.0, "u": ATOMIC_MASS}
_TEMPERATURE_UNITS = {"K": 1.0}
_AREA_UNITS = {"m2": 1.0, "um2": 1e-12}
# angular rates: *_Hz / *_kHz are ordinary frequencies, converted by 2*pi
_RATE_UNITS = {"rad_s": 1.0, "Hz": TWO_PI, "kHz": TWO_PI * 1e3}


class _Group:
    """One object of the config document with consumed-key tracking."""

    def __init__(self, name: str, raw: dict):
        if not isinstance(raw, dict):
            raise ConfigError(f"section '{name}' must be an object")
        self.name = name
        self.raw = raw
        self.seen: set[str] = set()

    def quantity(self, base: str, units: dict[str, float], *,
                 default: float | None = None, required: bool = False) -> float | None:
        hits = [k for k in self.raw if k in {f"{base}_{u}" for u in units}]
        if len(hits) > 1:
            raise ConfigError(
                f"{self.name}.{base} given in more than one unit: {sorted(hits)}")
        if not hits:
            if required:
                raise ConfigError(f"missing mandatory field {self.name}.{base} "
                                  f"(one of {sorted(f'{base}_{u}' for u in units)})")
            return default
        key = hits[0]
        self.seen.add(key)
        value = self.raw[key]
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"{self.name}.{key} must be a number, got {value!r}")
        unit = key[len(base) + 1:]
        return float(value) * units[unit]

    def plain(self, key: str, *, default: float | None = None,
              required: bool = False) -> float | None:
        if key not in self.raw:
            if required:
                raise ConfigError(f"missing mandatory field {self.name}.{key}")
            return default
        self.seen.add(key)
        value = self.raw[key]
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"{self.name}.{key} must be a number, got {value!r}")
        return float(value)

    def finish(self) -> None:
        leftovers = [k for k in self.raw
                     if k not in self.seen
                     and k != "comment" and not k.endswith("_comment")]
        if leftovers:
            raise UnknownKeyError(
                f"unknown key '{self.name}.{leftovers[0]}' (typo? unknown keys are rejected)")


def _parse_particle(raw: dict) -> Particle:
    g = _Group("particle", raw)
    particle = Particle(
        radius=g.quantity("radius", _LENGTH_UNITS, required=True),
        mass_density=g.quantity("mass_density", {"kg_m3": 1.0},
                                default=DEFAULT_MASS_DENSITY),
        eps_real=g.plain("eps_real", default=DEFAULT_EPS_REAL),
        eps_imag=g.plain("eps_imag", default=DEFAULT_EPS_IMAG),
        accommodation=g.plain("accommodation", default=DEFAULT_ACCOMMODATION),
    )
    g.finish()
    return particle


def _parse_gas(raw: dict) -> GasEnvironment:
    g = _Group("gas", raw)
    gas = GasEnvironment(
        pressure=g.quantity("pressure", _PRESSURE_UNITS, default=DEFAULT_PRESSURE),
        temperature=g.quantity("temperature", _TEMPERATURE_UNITS,
                               default=DEFAULT_GAS_TEMPERATURE),
        molecule_mass=g.quantity("molecule_mass", _MASS_UNITS,
                                 default=DEFAULT_MOLECULE_MASS),
        heat_capacity_ratio=g.plain("heat_capacity_ratio",
                                    default=DEFAULT_HEAT_CAPACITY_RATIO),
    )
    g.finish()
    return gas


def _parse_cavity(raw: dict) -> CavitySetup:
    g = _Group("cavity", raw)
    lev_linewidth = g.quantity("lev_linewidth", _RATE_UNITS, required=True)
    setup = CavitySetup(
        length=g.quantity("length", _LENGTH_UNITS, required=True),
        wavelength=g.quantity("wavelength", _LENGTH_UNITS, required=True),
        levitation_offset=g.quantity("levitation_offset", _LENGTH_UNITS, default=0.0),
        lev_linewidth=lev_linewidth,
        lev_power=g.quantity("lev_power", _POWER_UNITS, required=True),
        cool_linewidth=g.quantity("cool_linewidth", _RATE_UNITS, default=lev_linewidth),
        cool_power=g.quantity("cool_power", _POWER_UNITS, default=0.0),
    )
    g.finish()
    return setup


def _parse_lens(raw: dict) -> LensSetup:
    g = _Group("lens", raw)
    setup = LensSetup(
        numerical_aperture=g.plain("numerical_aperture", required=True),
        wavelength=g.quantity("wavelength", _LENGTH_UNITS, required=True),
        laser_power=g.quantity("laser_power", _POWER_UNITS, required=True),
    )
    g.finish()
    return setup


def _parse_gains(raw: dict) -> FeedbackGains:
    g = _Group("feedback_gains", raw)
    gains = FeedbackGains(
        x=g.quantity("x", _RATE_UNITS, default=0.0),
        y=g.quantity("y", _RATE_UNITS, default=0.0),
        z=g.quantity("z", _RATE_UNITS, default=0.0),
    )
    g.finish()
    return gains


def _parse_detector(raw: dict, lens: LensSetup) -> DetectorLayout:
    g = _Group("detector", raw)
    z0 = g.quantity("z0", _LENGTH_UNITS, required=True)
    # transverse offsets and area default to the sensitivity-maximizing
    # choice x0 = y0 = sqrt(area) = sqrt(lambda z0 / 45 pi)
    canonical = math.sqrt(lens.wavelength * z0 / (45.0 * math.pi))
    layout = DetectorLayout(
        z0=z0,
        x0=g.quantity("x0", _LENGTH_UNITS, default=canonical),
        y0=g.quantity("y0", _LENGTH_UNITS, default=canonical),
        area=g.quantity("area", _AREA_UNITS, default=canonical**2),
    )
    g.finish()
    return layout


def load_scenario(text: str) -> Scenario:
    """Parse a scenario JSON document into a validated :class:`Scenario`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("scenario document must be a JSON object")

    known = {"particle", "gas", "cavity", "lens", "feedback_gains", "detector"}
    for key in doc:
        if key not in known and key != "comment" and not key.endswith("_comment"):
            raise UnknownKeyError(f"unknown top-level key '{key}'")

    if "particle" not in doc:
        raise ConfigError("missing mandatory section 'particle'")
    if ("cavity" in doc) == ("lens" in doc):
        raise ConfigError("exactly one of 'cavity' or 'lens' must be present")

    particle = _parse_particle(doc["particle"])
    gas = _parse_gas(doc.get("gas", {}))

    if "cavity" in doc:
        optics: CavitySetup | LensSetup = _parse_cavity(doc["cavity"])
        gains = detector = None
        for section in ("feedback_gains", "detector"):
            if section in doc:
                raise ValidationError(
                    f"section '{section}' is only valid with a lens setup")
    else:
        optics = _parse_lens(doc["lens"])
        gains = _parse_gains(doc["feedback_gains"]) if "feedback_gains" in doc else None
        detector = _parse_detector(doc["detector"], optics) if "detector" in doc else None

    return Scenario(particle=particle, gas=gas, optics=optics,
                    feedback_gains=gains, detector=detector)


def load_scenario_file(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return load_scenario(fh.read())


def scenario_to_config(scenario: Scenario) -> dict[str, Any]:
    """Emit a scenario as a canonical SI-suffixed config dict.

    ``load_scenario(json.dumps(scenario_to_config(s)))`` reproduces ``s``
    exactly (floats round-trip bit-for-bit through JSON).
    """
    p, g = scenario.particle, scenario.gas
    doc: dict[str, Any] = {
        "particle": {
            "radius_m": p.radius,
            "mass_density_kg_m3": p.mass_density,
            "eps_real": p.eps_real,
            "eps_imag": p.eps_imag,
            "accommodation": p.accommodation,
        },
        "gas": {
            "pressure_Pa": g.pressure,
            "temperature_K": g.temperature,
            "molecule_mass_kg": g.molecule_mass,
            "heat_capacity_ratio": g.heat_capacity_ratio,
        },
    }
    if isinstance(scenario.optics, CavitySetup):
        c = scenario.optics
        doc["cavity"] = {
            "length_m": c.length,
            "wavelength_m": c.wavelength,
            "levitation_offset_m": c.levitation_offset,
            "lev_linewidth_rad_s": c.lev_linewidth,
            "lev_power_W": c.lev_power,
            "cool_linewidth_rad_s": c.cool_linewidth,
            "cool_power_W": c.cool_power,
        }
    else:
        lens = scenario.optics
        doc["lens"] = {
            "numerical_aperture": lens.numerical_aperture,
            "wavelength_m": lens.wavelength,
            "laser_power_W": lens.laser_power,
        }
    if scenario.feedback_gains is not None:
        fg = scenario.feedback_gains
        doc["feedback_gains"] = {"x_rad_s": fg.x, "y_rad_s": fg.y, "z_rad_s": fg.z}
    if scenario.detector is not None:
        d = scenario.detector
        doc["detector"] = {"z0_m": d.z0, "x0_m": d.x0, "y0_m": d.y0, "area_m2": d.area}
    return doc
