"""Finite trigonometric polynomials with exact analytic derivatives.

Both the anisotropy function and the initial support function are specified
as a0 + sum_k (ak cos k*t + bk sin k*t).  Keeping the coefficients around
means derivatives are exact (no numerical differentiation enters from this
side) and uniform-grid quadrature of products is exact below Nyquist.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TrigPolynomial:
    """a0 + sum over (k, ak, bk) of ak*cos(k t) + bk*sin(k t)."""

    a0: float
    harmonics: tuple[tuple[int, float, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        terms = []
        seen = set()
        for k, ak, bk in self.harmonics:
            k = int(k)
            if k < 1:
                raise ValueError(f"harmonic index must be >= 1, got {k}")
            if k in seen:
                raise ValueError(f"duplicate harmonic {k}")
            seen.add(k)
            ak, bk = float(ak), float(bk)
            if not (math.isfinite(ak) and math.isfinite(bk)):
                raise ValueError(f"non-finite coefficient at harmonic {k}")
            terms.append((k, ak, bk))
        if not math.isfinite(self.a0):
            raise ValueError("non-finite constant coefficient")
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "harmonics", tuple(sorted(terms)))

    @property
    def max_harmonic(self) -> int:
        return max((k for k, _, _ in self.harmonics), default=0)

    def odd_terms(self) -> list[int]:
        """Indices of odd harmonics with a nonzero coefficient."""
        return [k for k, ak, bk in self.harmonics if k % 2 == 1 and (ak != 0.0 or bk != 0.0)]

    def evaluate(self, theta: np.ndarray, order: int = 0) -> np.ndarray:
        """Sample the polynomial or its exact derivative of given order."""
        theta = np.asarray(theta, dtype=float)
        out = np.full_like(theta, self.a0 if order == 0 else 0.0)
        for k, ak, bk in self.harmonics:
            c, s = np.cos(k * theta), np.sin(k * theta)
            scale = float(k) ** order
            r = order % 4
            if r == 0:
                out += scale * (ak * c + bk * s)
            elif r == 1:
                out += scale * (-ak * s + bk * c)
            elif r == 2:
                out += scale * (-ak * c - bk * s)
            else:
                out += scale * (ak * s - bk * c)
        return out

    def scaled(self, c: float) -> "TrigPolynomial":
        return TrigPolynomial(c * self.a0, tuple((k, c * ak, c * bk) for k, ak, bk in self.harmonics))


def circle(radius: float = 1.0) -> TrigPolynomial:
    return TrigPolynomial(radius)
