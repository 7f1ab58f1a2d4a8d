"""levopt: trap parameters, temperatures, noise spectra and phonon budgets
for levitated-nanoparticle optomechanics, with a Langevin Monte Carlo oracle
validating the closed forms."""

from . import cavity, feedback, langevin, optics, spectra, thermo
from .scenario import (
    CavitySetup,
    DetectorLayout,
    FeedbackGains,
    GasEnvironment,
    LensSetup,
    Particle,
    Scenario,
    load_scenario,
    load_scenario_file,
    scenario_to_config,
)

__version__ = "0.1.0"

__all__ = [
    "CavitySetup",
    "DetectorLayout",
    "FeedbackGains",
    "GasEnvironment",
    "LensSetup",
    "Particle",
    "Scenario",
    "cavity",
    "feedback",
    "langevin",
    "load_scenario",
    "load_scenario_file",
    "optics",
    "scenario_to_config",
    "spectra",
    "thermo",
]
