"""Stochastic Langevin oracle with a compiled core and a pure-Python fallback.

The compiled extension (``levopt.langevin._kernels``) is preferred when it
imported cleanly; set LEVOPT_BACKEND=python|compiled to force one, or pass
``backend=`` to the simulate functions.
"""

import os

from . import _pykernels

try:
    from . import _kernels
    HAVE_COMPILED = True
except ImportError:
    _kernels = None
    HAVE_COMPILED = False


def available_backends() -> tuple[str, ...]:
    return ("compiled", "python") if HAVE_COMPILED else ("python",)


def get_kernels(backend: str = "auto"):
    """Resolve a backend name to its kernel module; returns (module, name)."""
    name = backend or "auto"
    if name == "auto":
        name = os.environ.get("LEVOPT_BACKEND",
                              "compiled" if HAVE_COMPILED else "python")
    if name == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError(
                "compiled kernels are unavailable (extension not built); "
                "use backend='python'")
        return _kernels, "compiled"
    if name == "python":
        return _pykernels, "python"
    raise ValueError(f"unknown backend {name!r}; expected auto|compiled|python")


def active_backend() -> str:
    return get_kernels("auto")[1]


from .config import SimConfig, SimResult  # noqa: E402
from .engine import (  # noqa: E402
    empirical_optimum_gain,
    exact_transition,
    simulate_cold_damping,
    simulate_parametric,
    simulate_thermal,
)

__all__ = [
    "HAVE_COMPILED",
    "SimConfig",
    "SimResult",
    "active_backend",
    "available_backends",
    "empirical_optimum_gain",
    "exact_transition",
    "get_kernels",
    "simulate_cold_damping",
    "simulate_parametric",
    "simulate_thermal",
]
