import dataclasses

import numpy as np
import pytest

from anisoflow import (
    CurveState,
    EnvelopeViolated,
    FlowConfig,
    NegativeDiscriminant,
    TrigPolynomial,
    bonnesen_wulff_margin,
    build_profile,
    classical_bonnesen_radii,
    center,
    convergence_metrics,
    decay_envelope_check,
    deficit,
    hausdorff_distance,
    make_record,
    reconstruct_points,
    run,
    state_from_coeffs,
    wulff_radii,
)
from anisoflow.cli import random_convex_coeffs

from conftest import ellipse_like, make_state

ANISO = TrigPolynomial(1.0, ((2, 0.2, 0.0),))


def circle_points(radius, n=256, shift=(0.0, 0.0)):
    th = 2 * np.pi * np.arange(n) / n
    return np.column_stack((shift[0] + radius * np.cos(th),
                            shift[1] + radius * np.sin(th)))


# -- deficit ----------------------------------------------------------------------

def test_deficit_zero_on_homotheties():
    prof = build_profile(ANISO, 256)
    for c in (0.5, 1.0, 2.0):
        assert abs(deficit(CurveState(c * prof.p_tilde), prof)) < 1e-12
    iso = build_profile(TrigPolynomial(1.0), 64)
    assert abs(deficit(make_state(1.0, [], 64), iso)) < 1e-13


def test_deficit_positive_for_ellipse():
    iso = build_profile(TrigPolynomial(1.0), 128)
    # analytic: A = pi*(1 - 1.5*eps^2), L = 2pi -> deficit = 1/(1-1.5eps^2) - 1
    eps = 0.3
    expected = 1.0 / (1.0 - 1.5 * eps * eps) - 1.0
    assert deficit(ellipse_like(128, eps), iso) == pytest.approx(expected, rel=1e-12)


# -- radii -------------------------------------------------------------------------

def test_wulff_radii_homothety():
    prof = build_profile(ANISO, 128)
    for c in (0.5, 2.0):
        r_in, r_out = wulff_radii(CurveState(c * prof.p_tilde), prof)
        assert r_in == pytest.approx(c, rel=1e-12)
        assert r_out == pytest.approx(c, rel=1e-12)
    iso = build_profile(TrigPolynomial(1.0), 128)
    r_in, r_out = wulff_radii(make_state(2.0, [], 128), iso)
    assert (r_in, r_out) == (pytest.approx(2.0), pytest.approx(2.0))


def test_wulff_radii_mild_perturbation():
    iso = build_profile(TrigPolynomial(1.0), 256)
    r_in, r_out = wulff_radii(make_state(1.0, [(2, 0.1, 0.0)], 256), iso)
    assert r_in == pytest.approx(0.9, abs=1e-12)
    assert r_out == pytest.approx(1.1, abs=1e-12)


def test_wulff_radii_translation_stable():
    # translated copy must report identical radii after Steiner centering
    iso = build_profile(TrigPolynomial(1.0), 256)
    base = make_state(1.0, [(2, 0.1, 0.0)], 256)
    shifted = make_state(1.0, [(1, 0.4, -0.2), (2, 0.1, 0.0)], 256)
    assert wulff_radii(shifted, iso) == pytest.approx(wulff_radii(base, iso), rel=1e-12)


def test_bonnesen_margin_equality_cases():
    prof = build_profile(ANISO, 128)
    assert abs(bonnesen_wulff_margin(CurveState(1.5 * prof.p_tilde), prof)) < 1e-12
    iso = build_profile(TrigPolynomial(1.0), 128)
    assert abs(bonnesen_wulff_margin(make_state(1.0, [], 128), iso)) < 1e-13


def test_bonnesen_margin_random_states():
    prof = build_profile(ANISO, 256)
    rng = np.random.default_rng(41)
    for _ in range(1000):
        st = state_from_coeffs(random_convex_coeffs(rng), 256)
        assert bonnesen_wulff_margin(st, prof) >= -1e-10


def test_classical_bonnesen_radii():
    for r in (0.5, 2.0):
        lo, hi = classical_bonnesen_radii(make_state(r, [], 64))
        assert lo == pytest.approx(r, abs=1e-10)
        assert hi == pytest.approx(r, abs=1e-10)
    lo, hi = classical_bonnesen_radii(make_state(1.0, [(1, 0.3, 0.0)], 64))
    assert lo == pytest.approx(1.0, abs=1e-7)
    assert hi == pytest.approx(1.0, abs=1e-7)


def test_classical_bonnesen_brackets_point_radii():
    st = make_state(1.0, [(2, 0.1, 0.0)], 256)
    lo, hi = classical_bonnesen_radii(st)
    centered = center(st)
    pts = reconstruct_points(centered)
    inr = centered.p.min()          # symmetric body: inradius = min support
    outr = np.linalg.norm(pts, axis=1).max()
    assert lo <= inr + 1e-12
    assert outr <= hi + 1e-12
    assert lo == pytest.approx(1 - np.sqrt(0.015), abs=1e-10)


def test_negative_discriminant_on_nyquist_noise():
    # content at the Nyquist mode breaks the L^2 >= 4piA quadrature identity
    n = 64
    p = 1.0 + 0.5 * np.cos(np.pi * np.arange(n))
    with pytest.raises(NegativeDiscriminant):
        classical_bonnesen_radii(CurveState(p))


# -- convergence metrics -------------------------------------------------------------

def test_convergence_metrics_at_limit():
    prof = build_profile(ANISO, 256)
    l0 = 3.7
    st = CurveState(l0 / (2 * prof.wulff_area) * prof.p_tilde)
    k_dev, hd = convergence_metrics(st, prof, l0)
    assert k_dev < 1e-10
    assert hd < 1e-10


def test_convergence_metrics_isotropic_circle():
    iso = build_profile(TrigPolynomial(1.0), 256)
    l0 = 2 * np.pi * 1.3
    st = make_state(l0 / (2 * np.pi), [], 256)
    k_dev, hd = convergence_metrics(st, iso, l0)
    assert k_dev < 1e-12
    assert hd < 1e-12


def test_convergence_metrics_decrease_along_run():
    prof = build_profile(ANISO, 64)
    init = make_state(1.0, [(4, 0.05, 0.0)], 64)
    traj = run(init, prof, FlowConfig(grid_n=64, t_end=1.0, record_every=500))
    kd = [r.k_dev for r in traj.records]
    hd = [r.hausdorff for r in traj.records]
    assert kd[-1] < kd[0] / 10
    assert hd[-1] < hd[0] / 10


# -- hausdorff ------------------------------------------------------------------------

def test_hausdorff_identical_is_zero():
    pts = circle_points(1.0)
    assert hausdorff_distance(pts, pts) == 0.0


def test_hausdorff_concentric_circles():
    assert hausdorff_distance(circle_points(1.0), circle_points(1.2)) == pytest.approx(
        0.2, abs=1e-3)


def test_hausdorff_shifted_circles():
    assert hausdorff_distance(circle_points(1.0),
                              circle_points(1.0, shift=(0.05, 0.0))) == pytest.approx(
        0.05, abs=1e-3)


def test_hausdorff_symmetric():
    a = circle_points(1.0, n=128)
    b = circle_points(0.7, n=200, shift=(0.1, -0.2))
    assert hausdorff_distance(a, b) == hausdorff_distance(b, a)


# -- records and envelope ---------------------------------------------------------------

def test_make_record_fields_finite():
    from anisoflow import anisotropic_length
    prof = build_profile(ANISO, 128)
    st = make_state(1.0, [(4, 0.05, 0.0)], 128)
    rec = make_record(st, prof, anisotropic_length(st, prof))
    assert rec.deficit >= -1e-10
    assert rec.r_in_w <= rec.r_out_w
    assert rec.k_min <= rec.k_max


def test_equality_detection():
    # deficit below 1e-10 exactly when the radii gap is below 1e-5
    prof = build_profile(ANISO, 128)
    stationary = CurveState(1.3 * prof.p_tilde)
    d = deficit(stationary, prof)
    r_in, r_out = wulff_radii(stationary, prof)
    assert d < 1e-10 and (r_out - r_in) < 1e-5

    mid = make_state(1.0, [(4, 0.05, 0.0)], 128)
    d = deficit(mid, prof)
    r_in, r_out = wulff_radii(mid, prof)
    assert d > 1e-10 and (r_out - r_in) > 1e-5


def test_envelope_holds_on_run():
    iso = build_profile(TrigPolynomial(1.0), 64)
    traj = run(ellipse_like(64), iso, FlowConfig(grid_n=64, t_end=30.0, record_every=50))
    report = decay_envelope_check(traj, iso)
    assert report.rate == pytest.approx(8 * np.pi ** 2 / traj.aniso_length0 ** 2, rel=1e-12)
    assert report.worst_envelope_excess <= 0
    assert report.n_records == len(traj.records)


def test_envelope_trivial_on_stationary():
    prof = build_profile(ANISO, 64)
    st = CurveState(prof.p_tilde)
    traj = run(st, prof, FlowConfig(grid_n=64, t_end=1.0))
    # single record: pad with a copy at a later time to satisfy the contract
    rec2 = dataclasses.replace(traj.records[0], t=1.0)
    decay_envelope_check([traj.records[0], rec2], prof)


def test_envelope_violation_raises():
    prof = build_profile(ANISO, 64)
    init = make_state(1.0, [(4, 0.05, 0.0)], 64)
    traj = run(init, prof, FlowConfig(grid_n=64, t_end=0.2, record_every=200))
    bad = [traj.records[0],
           dataclasses.replace(traj.records[-1], deficit=traj.records[0].deficit * 2)]
    with pytest.raises(EnvelopeViolated):
        decay_envelope_check(bad, prof)
