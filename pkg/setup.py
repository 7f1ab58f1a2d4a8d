"""Build script for the optional compiled Langevin kernels.

The package is fully functional without the extension (a pure-Python kernel
is selected at import time); the extension only accelerates the stochastic
integrator hot loop. A failed compile therefore downgrades to a warning
instead of aborting the install.
"""

import os
import warnings
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:  # building from an environment without build deps
    np = None
    cythonize = None


class OptionalBuildExt(build_ext):
    """Skip the extension (with a warning) when the toolchain is missing."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # no compiler, missing headers, ...
            warnings.warn(f"compiled kernels skipped ({exc}); using pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"compiled kernels skipped ({exc}); using pure-Python fallback")


def extensions():
    if np is None or cythonize is None or os.environ.get("LEVOPT_NO_EXT"):
        return []
    npyrandom_lib = Path(np.random.__file__).parent / "lib"
    ext = Extension(
        "levopt.langevin._kernels",
        ["src/levopt/langevin/_kernels.pyx"],
        include_dirs=[np.get_include()],
        library_dirs=[str(npyrandom_lib)],
        libraries=["npyrandom"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        # -ffp-contract=off keeps the compiled kernel arithmetic identical to
        # the pure-Python one (no FMA contraction), so backends agree bitwise.
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
