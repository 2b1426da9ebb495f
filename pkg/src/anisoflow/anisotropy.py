"""Anisotropy function ptilde and the Wulff shape it generates.

The anisotropy is a strictly positive trigonometric polynomial whose
convexity density phi = ptilde'' + ptilde must stay positive; the convex
body with support function ptilde is the Wulff shape, the equilibrium of
the flow.  Profiles are validated once at construction and immutable
afterwards, so they can be shared freely between threads.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import AsymmetricAnisotropy, NonConvexAnisotropy, NonPositiveSupport
from .trig import TrigPolynomial

log = logging.getLogger(__name__)

# Reject profiles whose convexity density dips below this margin instead of
# exactly zero, so 1/phi stays well conditioned downstream.
PHI_MARGIN = 1e-8

MIN_GRID = 16


def grid_angles(n: int) -> np.ndarray:
    """Uniform angle grid 2*pi*j/n, j = 0..n-1."""
    return 2.0 * np.pi * np.arange(n) / n


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class AnisotropyProfile:
    """Validated anisotropy samples and derived constants on a uniform grid.

    Identity semantics (eq=False) keep the type hashable despite the array
    fields, so evaluation caches can key on the profile object.
    """

    coeffs: TrigPolynomial
    grid_n: int
    theta: np.ndarray
    p_tilde: np.ndarray
    p_tilde_d1: np.ndarray
    p_tilde_d2: np.ndarray
    phi: np.ndarray
    wulff_area: float
    m1: float
    m2: float
    symmetric: bool

    def scaled(self, c: float) -> "AnisotropyProfile":
        """Profile of the homothetic anisotropy c*ptilde (c > 0)."""
        if c <= 0:
            raise ValueError("scale factor must be positive")
        return build_profile(self.coeffs.scaled(c), self.grid_n,
                             require_symmetry=self.symmetric)


def build_profile(coeffs: TrigPolynomial, grid_n: int,
                  require_symmetry: bool = True) -> AnisotropyProfile:
    """Construct and validate an anisotropy profile.

    Derivative samples come from the coefficients, not from numerical
    differentiation.  Raises NonPositiveSupport, NonConvexAnisotropy or
    AsymmetricAnisotropy when the corresponding invariant fails.
    """
    grid_n = int(grid_n)
    if grid_n < MIN_GRID or grid_n % 2 != 0:
        raise ValueError(f"grid_n must be even and >= {MIN_GRID}, got {grid_n}")
    if coeffs.max_harmonic >= grid_n // 2:
        raise ValueError(
            f"highest harmonic {coeffs.max_harmonic} must be below grid_n/2 = {grid_n // 2}")

    odd = coeffs.odd_terms()
    symmetric = not odd
    if require_symmetry and not symmetric:
        raise AsymmetricAnisotropy(
            f"odd harmonics {odd} break ptilde(t + pi) = ptilde(t)")
    if not symmetric:
        log.warning(
            "asymmetric anisotropy accepted by override; the Wulff-Gage "
            "inequality needs central symmetry and its margin may go negative")

    theta = grid_angles(grid_n)
    p_tilde = coeffs.evaluate(theta, 0)
    d1 = coeffs.evaluate(theta, 1)
    d2 = coeffs.evaluate(theta, 2)
    phi = d2 + p_tilde

    if p_tilde.min() <= 0.0:
        raise NonPositiveSupport(f"min ptilde = {p_tilde.min():.6g} <= 0")
    m1 = float(phi.min())
    m2 = float(phi.max())
    if m1 < PHI_MARGIN:
        raise NonConvexAnisotropy(
            f"min(ptilde'' + ptilde) = {m1:.6g} below margin {PHI_MARGIN:g}")

    h = 2.0 * np.pi / grid_n
    area = 0.5 * h * float(np.sum(p_tilde * p_tilde - d1 * d1))

    return AnisotropyProfile(
        coeffs=coeffs,
        grid_n=grid_n,
        theta=_frozen(theta),
        p_tilde=_frozen(p_tilde),
        p_tilde_d1=_frozen(d1),
        p_tilde_d2=_frozen(d2),
        phi=_frozen(phi),
        wulff_area=area,
        m1=m1,
        m2=m2,
        symmetric=symmetric,
    )


def wulff_area(profile: AnisotropyProfile) -> float:
    """Area of the Wulff shape, 0.5 * integral of (ptilde^2 - ptilde'^2).

    Uniform-grid quadrature is exact here because the integrand is a
    trigonometric polynomial below Nyquist.
    """
    h = 2.0 * np.pi / profile.grid_n
    return 0.5 * h * float(np.sum(profile.p_tilde ** 2 - profile.p_tilde_d1 ** 2))


def wulff_boundary(profile: AnisotropyProfile) -> np.ndarray:
    """Boundary points of the Wulff shape, counterclockwise, shape (n, 2).

    With outward normal n(t) = (cos t, sin t) and tangent (-sin t, cos t)
    the boundary is ptilde * n + ptilde' * tangent.
    """
    c, s = np.cos(profile.theta), np.sin(profile.theta)
    p, d1 = profile.p_tilde, profile.p_tilde_d1
    return np.column_stack((p * c - d1 * s, p * s + d1 * c))
