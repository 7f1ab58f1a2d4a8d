"""Minimal dimension-tagged arithmetic for auditing composed formulas.

A Q carries a magnitude and SI base-unit exponents (m, kg, s, K); the
arithmetic operators propagate the exponents so a test can rebuild a
published formula from tagged constants and assert the result's units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

_ZERO = (Fraction(0), Fraction(0), Fraction(0), Fraction(0))


@dataclass(frozen=True)
class Q:
    value: float
    dims: tuple = _ZERO  # exponents of (m, kg, s, K)

    def __mul__(self, other):
        other = _as_q(other)
        return Q(self.value * other.value,
                 tuple(a + b for a, b in zip(self.dims, other.dims)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_q(other)
        return Q(self.value / other.value,
                 tuple(a - b for a, b in zip(self.dims, other.dims)))

    def __rtruediv__(self, other):
        return _as_q(other) / self

    def __add__(self, other):
        other = _as_q(other)
        if self.dims != other.dims:
            raise AssertionError(f"adding {self.dims} to {other.dims}")
        return Q(self.value + other.value, self.dims)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_q(other)
        if self.dims != other.dims:
            raise AssertionError(f"subtracting {other.dims} from {self.dims}")
        return Q(self.value - other.value, self.dims)

    def __pow__(self, n):
        return Q(self.value**n, tuple(a * Fraction(n) for a in self.dims))

    def sqrt(self):
        return Q(math.sqrt(self.value),
                 tuple(a / 2 for a in self.dims))

    @property
    def dimensionless(self) -> bool:
        return self.dims == _ZERO


def _as_q(x) -> Q:
    return x if isinstance(x, Q) else Q(float(x))


def unit(m=0, kg=0, s=0, K=0) -> tuple:
    return (Fraction(m), Fraction(kg), Fraction(s), Fraction(K))


METER = Q(1.0, unit(m=1))
KILOGRAM = Q(1.0, unit(kg=1))
SECOND = Q(1.0, unit(s=1))
KELVIN = Q(1.0, unit(K=1))
RATE = Q(1.0, unit(s=-1))            # rad/s
WATT = Q(1.0, unit(m=2, kg=1, s=-3))
JOULE_SECOND = Q(1.0, unit(m=2, kg=1, s=-1))
JOULE_PER_KELVIN = Q(1.0, unit(m=2, kg=1, s=-2, K=-1))
