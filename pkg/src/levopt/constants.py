"""Physical constants (CODATA 2018) and unit conversion factors.

All library code works in SI; every quantity leaving the scenario loader is
already converted. Angular rates are rad/s throughout.
"""

import math

# CODATA 2018 exact / recommended values
C_LIGHT = 299_792_458.0              # speed of light in vacuum, m/s
PLANCK = 6.626_070_15e-34            # Planck constant, J s
HBAR = PLANCK / (2.0 * math.pi)      # reduced Planck constant, J s
K_BOLTZMANN = 1.380_649e-23          # Boltzmann constant, J/K
EPSILON_0 = 8.854_187_8128e-12       # vacuum permittivity, F/m
SIGMA_SB = 5.670_374_419e-8          # Stefan-Boltzmann constant, W m^-2 K^-4
G_STANDARD = 9.806_65                # standard gravity, m/s^2

MBAR_TO_PA = 100.0
ATOMIC_MASS = 1.660_539_066_60e-27   # unified atomic mass unit, kg
