"""Split representation of complex scalars: explicit (real, imaginary) pairs.

All downstream dynamics run on real pairs; complex products are evaluated
through the constant 2x2 matrices M_R and M_I as bilinear forms, which keeps
the real-pair formulation itself under test against ordinary complex
arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Product matrices: a*b = (hat(a)^T M_R hat(b), hat(a)^T M_I hat(b)).
M_R = np.array([[1.0, 0.0], [0.0, -1.0]])
M_I = np.array([[0.0, 1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class SplitComplex:
    """A complex number stored as its real/imaginary pair."""

    re: float
    im: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError(f"non-finite split pair ({self.re}, {self.im})")

    @staticmethod
    def from_complex(z: complex) -> "SplitComplex":
        return SplitComplex(z.real, z.imag)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def __add__(self, other: "SplitComplex") -> "SplitComplex":
        return SplitComplex(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "SplitComplex") -> "SplitComplex":
        return SplitComplex(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "SplitComplex":
        return SplitComplex(-self.re, -self.im)

    def scale(self, c: float) -> "SplitComplex":
        return SplitComplex(c * self.re, c * self.im)


ZERO = SplitComplex(0.0, 0.0)
ONE = SplitComplex(1.0, 0.0)


def hat(a: SplitComplex) -> tuple[float, float]:
    """The hat map: a -> (a.re, a.im)."""
    return (a.re, a.im)


def product_split(a: SplitComplex, b: SplitComplex) -> SplitComplex:
    """Complex product evaluated literally through the M-matrix bilinear forms.

    Agrees with schoolbook complex multiplication in exact arithmetic; the
    bilinear evaluation is deliberate (the equivalence is property-tested,
    not assumed).
    """
    ah = np.array(hat(a))
    bh = np.array(hat(b))
    return SplitComplex(float(ah @ M_R @ bh), float(ah @ M_I @ bh))


def abs_pair(a: SplitComplex) -> tuple[float, float]:
    """Componentwise absolute values (|re|, |im|)."""
    return (abs(a.re), abs(a.im))


def pos_part(a: float) -> float:
    """max(0, a)."""
    return a if a > 0.0 else 0.0
