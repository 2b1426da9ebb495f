"""Monitored quantities and inequality margins for recorded states.

Each record carries the conserved energy, the enclosed area, the nonlocal
multiplier, the anisoperimetric deficit, anisotropic-curvature extrema and
convergence metrics, plus the signed slack of every inequality the flow is
supposed to respect.  All slacks share one absolute quadrature tolerance
(1e-10 on unit-scale bodies) so reports stay uniform.

The Wulff inradius/outradius use a fixed-translation surrogate: both bodies
are Steiner-centered and the extrema of p/ptilde are reported.  This is
deterministic and closed form; the surrogate bracket certifies itself
because any common center is a valid containment witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .anisotropy import AnisotropyProfile, wulff_boundary
from .curve import (
    CurveState,
    anisotropic_curvature,
    anisotropic_length,
    area,
    center,
    curvature_density,
    length,
    reconstruct_points,
    steiner_point,
)
from .errors import EnvelopeViolated, NegativeDiscriminant, NonFiniteState

# Absolute tolerance layered on top of roundoff-sensitive comparisons near
# zero (deficits at the machine floor wiggle by ~1e-15).
QUAD_ATOL = 1e-12


@dataclass(frozen=True)
class InequalityMargins:
    """Signed slack (>= 0 means satisfied) of each monitored inequality."""

    minkowski: float
    wulff_gage: float
    bonnesen_wulff: float
    lambda_lo: float
    lambda_hi: float


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    aniso_length: float
    area: float
    lam: float
    deficit: float
    k_min: float
    k_max: float
    k_dev: float
    r_in_w: float
    r_out_w: float
    hausdorff: float
    margins: InequalityMargins


def deficit(state: CurveState, profile: AnisotropyProfile) -> float:
    """Anisoperimetric deficit L^2/(4*A*Atilde) - 1; zero on homotheties."""
    el = anisotropic_length(state, profile)
    return el * el / (4.0 * area(state) * profile.wulff_area) - 1.0


def wulff_radii(state: CurveState, profile: AnisotropyProfile) -> tuple[float, float]:
    """Steiner-centered support-ratio extrema (r_in, r_out).

    r_in * Wulff fits inside the centered body and r_out * Wulff covers it,
    both about the common Steiner center.
    """
    p_c = center(state).p
    s = steiner_point(CurveState(profile.p_tilde))
    th = state.theta
    pt_c = profile.p_tilde - s[0] * np.cos(th) - s[1] * np.sin(th)
    ratio = p_c / pt_c
    return float(ratio.min()), float(ratio.max())


def bonnesen_wulff_margin(state: CurveState, profile: AnisotropyProfile) -> float:
    """deficit - (Atilde/4A) * (r_out - r_in)^2 with the surrogate radii."""
    r_in, r_out = wulff_radii(state, profile)
    gap = r_out - r_in
    return deficit(state, profile) - profile.wulff_area / (4.0 * area(state)) * gap * gap


def classical_bonnesen_radii(state: CurveState) -> tuple[float, float]:
    """Circle-gauge bracket ((L - s)/2pi, (L + s)/2pi), s = sqrt(L^2 - 4piA).

    The true inradius and outradius lie inside this bracket.  Raises
    NegativeDiscriminant when L^2 < 4piA beyond quadrature tolerance.
    """
    el = length(state)
    a = area(state)
    disc = el * el - 4.0 * math.pi * a
    if disc < -1e-12:
        raise NegativeDiscriminant(f"L^2 - 4piA = {disc:.6g} < 0")
    s = math.sqrt(max(disc, 0.0))
    return (el - s) / (2.0 * math.pi), (el + s) / (2.0 * math.pi)


def identity_margin(state: CurveState, profile: AnisotropyProfile) -> float:
    """Integral of ptilde * K over arc length minus 2*Atilde.

    The integral collapses to the Wulff-area identity for every convex
    state, symmetric or not; the returned value is pure quadrature noise.
    """
    ka = anisotropic_curvature(state, profile)
    rho = curvature_density(state)
    h = 2.0 * np.pi / state.grid_n
    return h * float(np.sum(profile.p_tilde * ka * rho)) - 2.0 * profile.wulff_area


def _directed_hausdorff(points: np.ndarray, poly: np.ndarray) -> float:
    a = poly
    b = np.roll(poly, -1, axis=0)
    ab = b - a
    denom = np.sum(ab * ab, axis=1)
    ap = points[:, None, :] - a[None, :, :]
    tt = np.clip(np.einsum("nmk,mk->nm", ap, ab) / denom, 0.0, 1.0)
    proj = a[None, :, :] + tt[..., None] * ab[None, :, :]
    d = np.linalg.norm(points[:, None, :] - proj, axis=2)
    return float(d.min(axis=1).max())


def hausdorff_distance(pa: np.ndarray, pb: np.ndarray) -> float:
    """Two-sided Hausdorff distance between closed polylines (brute force)."""
    return max(_directed_hausdorff(pa, pb), _directed_hausdorff(pb, pa))


def _centered_limit_points(profile: AnisotropyProfile, l0: float) -> np.ndarray:
    scale = l0 / (2.0 * profile.wulff_area)
    pts = scale * wulff_boundary(profile)
    s = scale * steiner_point(CurveState(profile.p_tilde))
    return pts - s


def convergence_metrics(state: CurveState, profile: AnisotropyProfile,
                        l0: float) -> tuple[float, float]:
    """(sup|K - 2*Atilde/l0|, Hausdorff distance to the scaled Wulff shape).

    Both the state and the limit candidate are Steiner-centered before the
    Hausdorff comparison.
    """
    ka = anisotropic_curvature(state, profile)
    k_dev = float(np.max(np.abs(ka - 2.0 * profile.wulff_area / l0)))
    pts = reconstruct_points(center(state))
    hd = hausdorff_distance(pts, _centered_limit_points(profile, l0))
    return k_dev, hd


def make_record(state: CurveState, profile: AnisotropyProfile, l0: float) -> DiagnosticsRecord:
    """Evaluate every monitored quantity for one state."""
    el = anisotropic_length(state, profile)
    a = area(state)
    ka = anisotropic_curvature(state, profile)
    h = 2.0 * np.pi / state.grid_n
    # lam = integral of ptilde K^2 ds = integral of ptilde*phi*K dtheta
    lam = h * float(np.sum(profile.p_tilde * profile.phi * ka))
    at = profile.wulff_area
    dfc = el * el / (4.0 * a * at) - 1.0
    k_min = float(ka.min())
    k_max = float(ka.max())
    k_dev, hd = convergence_metrics(state, profile, l0)
    r_in, r_out = wulff_radii(state, profile)
    gap = r_out - r_in
    margins = InequalityMargins(
        minkowski=el * el - 4.0 * at * a,
        wulff_gage=lam - at * el / a,
        bonnesen_wulff=dfc - at / (4.0 * a) * gap * gap,
        lambda_lo=lam - 4.0 * at * at / l0,
        lambda_hi=2.0 * at * k_max - lam,
    )
    rec = DiagnosticsRecord(
        t=state.time, aniso_length=el, area=a, lam=lam, deficit=dfc,
        k_min=k_min, k_max=k_max, k_dev=k_dev,
        r_in_w=r_in, r_out_w=r_out, hausdorff=hd, margins=margins,
    )
    fields = (rec.t, rec.aniso_length, rec.area, rec.lam, rec.deficit,
              rec.k_min, rec.k_max, rec.k_dev, rec.r_in_w, rec.r_out_w,
              rec.hausdorff, margins.minkowski, margins.wulff_gage,
              margins.bonnesen_wulff, margins.lambda_lo, margins.lambda_hi)
    if not all(math.isfinite(v) for v in fields):
        raise NonFiniteState(f"non-finite diagnostics at t = {state.time:.9g}")
    return rec


@dataclass(frozen=True)
class EnvelopeReport:
    n_records: int
    rate: float
    deficit0: float
    worst_envelope_excess: float
    worst_monotone_excess: float


def decay_envelope_check(trajectory, profile: AnisotropyProfile,
                         eta: float = 1e-6) -> EnvelopeReport:
    """Verify deficit(t) <= deficit(0) * exp(-8*Atilde^2*t/L0^2) * (1 + eta).

    Also checks that the deficit never increases between records (up to a
    1e-10 relative slack plus an absolute floor for the roundoff regime).
    Raises EnvelopeViolated naming the first offending record.
    """
    records = getattr(trajectory, "records", trajectory)
    if len(records) < 2:
        raise ValueError("need at least 2 records")
    l0 = records[0].aniso_length
    t0 = records[0].t
    d0 = records[0].deficit
    rate = 8.0 * profile.wulff_area ** 2 / (l0 * l0)

    worst_env = -math.inf
    worst_mono = -math.inf
    prev = d0
    for i, rec in enumerate(records):
        bound = d0 * math.exp(-rate * (rec.t - t0)) * (1.0 + eta) + QUAD_ATOL
        worst_env = max(worst_env, rec.deficit - bound)
        if rec.deficit > bound:
            raise EnvelopeViolated(
                f"record {i} at t = {rec.t:.9g}: deficit {rec.deficit:.6g} "
                f"exceeds envelope {bound:.6g}")
        mono_bound = prev * (1.0 + 1e-10) + QUAD_ATOL
        worst_mono = max(worst_mono, rec.deficit - mono_bound)
        if rec.deficit > mono_bound:
            raise EnvelopeViolated(
                f"record {i} at t = {rec.t:.9g}: deficit {rec.deficit:.6g} "
                f"rose above previous {prev:.6g}")
        prev = rec.deficit
    return EnvelopeReport(
        n_records=len(records), rate=rate, deficit0=d0,
        worst_envelope_excess=worst_env, worst_monotone_excess=worst_mono)
