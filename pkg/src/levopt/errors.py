"""Exception and warning taxonomy.

ValidationError and its subclasses map to CLI exit code 3, the numerical
errors to exit code 4.
"""


class LevoptError(Exception):
    """Base class for all library errors."""


class ConfigError(LevoptError):
    """Malformed scenario document (syntax, wrong types)."""


class UnknownKeyError(ConfigError):
    """Scenario document contains a key the schema does not define."""


class ValidationError(LevoptError):
    """A value violates an invariant; the message names the field."""


class NumericalError(LevoptError):
    """Base class for solver / integrator failures."""


class NoRootError(NumericalError):
    """Power balance has no root below the search ceiling."""


class NonUnimodalError(NumericalError):
    """Coarse scan found multiple separated minima; refinement aborted."""


class StabilityError(NumericalError):
    """Integrator time step violates the stability/accuracy bound."""


class StepSizeError(NumericalError):
    """Finite-difference step too large for the requested derivative."""


class InfeasibleTargetError(NumericalError):
    """Requested phonon target lies below the backaction floor."""


class ConvergenceError(NumericalError):
    """Adaptive quadrature failed to converge within the depth limit."""


class RegimeWarning(UserWarning):
    """An approximation regime assumed by a closed form is being stretched."""
