"""Support-function representation of a convex curve and its functionals.

A curve is stored as samples p(t_j) of its support function on the uniform
angle grid t_j = 2*pi*j/n.  The grid parameter is the outward-normal angle;
every functional below is an integral over the full period, so the choice
of a fixed rotation of the parameter does not affect any value.

Curvature is kappa = 1/(p + p''), positive exactly when the curve is
convex.  All integrals use the uniform trapezoid rule, which is spectrally
accurate on periodic data and exact for trigonometric polynomials below
Nyquist.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .anisotropy import AnisotropyProfile, grid_angles
from .errors import ConvexityLost
from .trig import TrigPolynomial

# Absolute floor on p + p''.  Positivity is guaranteed for the continuous
# flow; hitting this floor signals a step-size failure, not a valid state.
EPS_CONVEX = 1e-10


@dataclass(frozen=True, eq=False)
class CurveState:
    """Support-function samples plus the current flow time."""

    p: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        p = np.ascontiguousarray(self.p, dtype=float)
        if p.ndim != 1 or len(p) % 2 != 0:
            raise ValueError("support samples must be a 1-d array of even length")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "time", float(self.time))

    @property
    def grid_n(self) -> int:
        return len(self.p)

    @property
    def theta(self) -> np.ndarray:
        return grid_angles(len(self.p))

    def with_p(self, p: np.ndarray, time: float | None = None) -> "CurveState":
        return CurveState(p, self.time if time is None else time)


def state_from_coeffs(coeffs: TrigPolynomial, grid_n: int, time: float = 0.0) -> CurveState:
    """Sample a trigonometric support function on the uniform grid."""
    return CurveState(coeffs.evaluate(grid_angles(grid_n)), time)


def spectral_derivative(samples: np.ndarray, order: int) -> np.ndarray:
    """Derivative of the trigonometric interpolant on the uniform grid.

    The Nyquist mode is zeroed for odd orders (its derivative is not
    representable on the grid).
    """
    samples = np.asarray(samples, dtype=float)
    n = len(samples)
    if n % 2 != 0:
        raise ValueError("grid length must be even")
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    spec = np.fft.rfft(samples)
    k = np.arange(n // 2 + 1, dtype=float)
    if order == 1:
        spec *= 1j * k
        spec[-1] = 0.0
    else:
        spec *= -(k * k)
    return np.fft.irfft(spec, n)


def _quad_weight(n: int) -> float:
    return 2.0 * np.pi / n


def curvature_density(state: CurveState) -> np.ndarray:
    """p + p'', the radius of curvature; positive iff the curve is convex."""
    return state.p + spectral_derivative(state.p, 2)


def curvature(state: CurveState) -> np.ndarray:
    rho = curvature_density(state)
    m = rho.min()
    if m <= EPS_CONVEX:
        raise ConvexityLost(f"min(p + p'') = {m:.6g} at t = {state.time:.6g}")
    return 1.0 / rho


def _check_grids(state: CurveState, profile: AnisotropyProfile) -> None:
    if state.grid_n != profile.grid_n:
        raise ValueError(
            f"grid mismatch: curve n = {state.grid_n}, profile n = {profile.grid_n}")


def anisotropic_curvature(state: CurveState, profile: AnisotropyProfile) -> np.ndarray:
    """phi * kappa; identically 1 on the Wulff boundary."""
    _check_grids(state, profile)
    return profile.phi * curvature(state)


def area(state: CurveState) -> float:
    """Enclosed area, 0.5 * integral of (p^2 - p'^2)."""
    d1 = spectral_derivative(state.p, 1)
    return 0.5 * _quad_weight(state.grid_n) * float(np.sum(state.p ** 2 - d1 ** 2))


def length(state: CurveState) -> float:
    """Perimeter, the integral of p."""
    return _quad_weight(state.grid_n) * float(np.sum(state.p))


def anisotropic_length(state: CurveState, profile: AnisotropyProfile) -> float:
    """Total interfacial energy, integral of ptilde * (p + p'').

    The division-free form avoids amplifying error where kappa is small;
    it equals the integral of ptilde ds.
    """
    _check_grids(state, profile)
    rho = curvature_density(state)
    return _quad_weight(state.grid_n) * float(np.sum(profile.p_tilde * rho))


def anisotropic_total_curvature(state: CurveState, profile: AnisotropyProfile) -> float:
    """Integral of the anisotropic curvature over arc length.

    Equals the integral of ptilde over the angle grid, hence 2*pi*a0 for
    every curve: a conserved constant independent of the state.
    """
    _check_grids(state, profile)
    return _quad_weight(state.grid_n) * float(np.sum(profile.p_tilde))


def reconstruct_points(state: CurveState) -> np.ndarray:
    """Planar points p*n + p'*tangent on the grid, shape (n, 2).

    Raises ConvexityLost when the state is not convex, since the formula
    only traces an embedded curve in that case.
    """
    curvature(state)
    th = state.theta
    c, s = np.cos(th), np.sin(th)
    d1 = spectral_derivative(state.p, 1)
    return np.column_stack((state.p * c - d1 * s, state.p * s + d1 * c))


def steiner_point(state: CurveState) -> np.ndarray:
    """Area-weighted canonical center, (1/pi) * integral of p * n."""
    th = state.theta
    w = _quad_weight(state.grid_n) / np.pi
    return np.array([w * float(np.sum(state.p * np.cos(th))),
                     w * float(np.sum(state.p * np.sin(th)))])


def center(state: CurveState) -> CurveState:
    """Translate so the Steiner point sits at the origin.

    Translation by -s changes the support function by -<s, n>.
    """
    s = steiner_point(state)
    th = state.theta
    return state.with_p(state.p - s[0] * np.cos(th) - s[1] * np.sin(th))


def is_convex_polyline(points: np.ndarray, tol: float = 0.0) -> bool:
    """True when all consecutive edge cross products share one sign."""
    e = np.roll(points, -1, axis=0) - points
    cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
    return bool(np.all(cross >= -tol) or np.all(cross <= tol))


def polygon_area(points: np.ndarray) -> float:
    """Shoelace area of a closed polyline."""
    x, y = points[:, 0], points[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
