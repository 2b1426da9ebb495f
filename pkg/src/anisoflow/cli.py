"""Command-line entry point.

Subcommands:
  run    integrate a configured flow; writes CSV, SVG snapshots, figures
  wulff  emit the Wulff boundary of the configured anisotropy (SVG + CSV)
  check  audit the geometric inequalities over random convex curves
  sweep  repeat `run` over a list of values for one config key

Exit codes: 0 success, 1 parse/validation problems, 2 runtime failures
(ConvexityLost, EnvelopeViolated, NonFiniteState, output errors).
"""

from __future__ import annotations

import argparse
import sys
import time as _time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import io as aio
from .anisotropy import wulff_boundary
from .curve import CurveState, anisotropic_length, area, state_from_coeffs
from .diagnostics import bonnesen_wulff_margin, identity_margin
from .errors import (
    AnisoflowError,
    ConvexityLost,
    EnvelopeViolated,
    IoError,
    NonFiniteState,
    ParseError,
    ValidationError,
)
from .flow import lambda_forcing, run as run_flow
from .trig import TrigPolynomial

_RUNTIME_ERRORS = (ConvexityLost, EnvelopeViolated, NonFiniteState, IoError)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="anisoflow",
        description="Anisotropic-length-preserving curve flow simulator")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("config", help="path to the INI config document")
        p.add_argument("--override", action="append", default=[],
                       metavar="SECTION.KEY=VALUE",
                       help="override a config value (repeatable)")

    p = sub.add_parser("run", help="integrate the configured flow")
    add_common(p)

    p = sub.add_parser("wulff", help="emit the Wulff boundary only")
    add_common(p)

    p = sub.add_parser("check", help="random-curve inequality audit")
    add_common(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None,
                   help="defaults to the config seed")

    p = sub.add_parser("sweep", help="parameter sweep of runs")
    add_common(p)
    p.add_argument("--param", required=True, metavar="SECTION.KEY")
    p.add_argument("--values", required=True,
                   help="comma-separated values for the swept key")
    p.add_argument("--parallel", action="store_true",
                   help="run sweep points in separate processes")
    return ap


def _load_spec(path: str, overrides: list[str]) -> aio.RunSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc}") from exc
    return aio.parse_config(text, tuple(overrides))


def _cmd_run(spec: aio.RunSpec) -> int:
    t_wall = _time.perf_counter()
    profile = spec.build_profile()
    initial = spec.build_initial()
    out = spec.out_dir
    out.mkdir(parents=True, exist_ok=True)

    try:
        traj = run_flow(initial, profile, spec.flow, spec.snapshot_times)
    except ConvexityLost as err:
        partial = getattr(err, "trajectory", None)
        if partial is not None and partial.records:
            aio.write_timeseries(partial, out / spec.timeseries_name)
            print(f"partial time series written to {out / spec.timeseries_name}")
        raise

    aio.write_timeseries(traj, out / spec.timeseries_name)
    for i, (ts, state) in enumerate(traj.snapshots):
        aio.write_snapshot(state, profile, traj.aniso_length0,
                           out / f"snapshot_{i:03d}_t{ts:.6g}.svg")
    if spec.figures:
        from .report import render_report
        render_report(traj, profile, initial, out)

    last = traj.records[-1]
    drift = max(abs(r.aniso_length - traj.aniso_length0) for r in traj.records)
    elapsed = _time.perf_counter() - t_wall
    print(f"run: N={spec.flow.grid_n} steps={traj.n_steps} "
          f"records={len(traj.records)} stop={traj.stop_reason}")
    print("wulff radii surrogate: steiner-centered support ratios")
    print(f"final: t={last.t:.9g} k_dev={last.k_dev:.6e} "
          f"deficit={last.deficit:.6e} "
          f"energy_drift={drift / traj.aniso_length0:.3e}")
    print(f"outputs: {out}")
    print(f"elapsed: {elapsed:.2f}s")
    return 0


def _cmd_wulff(spec: aio.RunSpec) -> int:
    profile = spec.build_profile()
    out = spec.out_dir
    out.mkdir(parents=True, exist_ok=True)
    pts = wulff_boundary(profile)
    aio.write_points_csv(pts, profile, out / "wulff.csv")
    # Snapshot of the Wulff boundary against itself (limit scale 1).
    state = CurveState(profile.p_tilde)
    aio.write_snapshot(state, profile, 2.0 * profile.wulff_area, out / "wulff.svg")
    print(f"wulff: N={profile.grid_n} area={profile.wulff_area:.12g} "
          f"phi in [{profile.m1:.6g}, {profile.m2:.6g}] "
          f"symmetric={profile.symmetric}")
    print(f"outputs: {out / 'wulff.csv'}, {out / 'wulff.svg'}")
    return 0


def random_convex_coeffs(rng: np.random.Generator, max_harmonic: int = 6,
                         amplitude: float = 0.22, decay: float = 0.55,
                         min_density: float = 5e-2) -> TrigPolynomial:
    """Random support-function coefficients, rejected until convex.

    Coefficient magnitudes decay geometrically in the harmonic index; a
    candidate is accepted once min(p + p'') clears min_density.  Harmonic 1
    terms are kept so translation handling is exercised.
    """
    th = np.linspace(0.0, 2.0 * np.pi, 512, endpoint=False)
    while True:
        harmonics = []
        for k in range(1, max_harmonic + 1):
            sigma = amplitude * decay ** (k - 1)
            harmonics.append((k, sigma * rng.uniform(-1.0, 1.0),
                              sigma * rng.uniform(-1.0, 1.0)))
        poly = TrigPolynomial(1.0, tuple(harmonics))
        density = poly.evaluate(th, 0) + poly.evaluate(th, 2)
        if density.min() > min_density and poly.evaluate(th, 0).min() > 0:
            return poly


def _cmd_check(spec: aio.RunSpec, trials: int, seed: int | None) -> int:
    profile = spec.build_profile()
    rng = np.random.default_rng(spec.seed if seed is None else seed)
    tol = 1e-10
    at = profile.wulff_area

    violations = {"minkowski": 0, "wulff_gage": 0, "identity": 0, "bonnesen": 0}
    worst = {"minkowski": np.inf, "wulff_gage": np.inf,
             "identity": 0.0, "bonnesen": np.inf}
    for _ in range(trials):
        poly = random_convex_coeffs(rng)
        state = state_from_coeffs(poly, profile.grid_n)
        el = anisotropic_length(state, profile)
        a = area(state)
        lam = lambda_forcing(state, profile)
        m_minkowski = el * el - 4.0 * at * a
        m_gage = lam - at * el / a
        m_identity = identity_margin(state, profile)
        m_bonnesen = bonnesen_wulff_margin(state, profile)
        if m_minkowski < -tol:
            violations["minkowski"] += 1
        if m_gage < -tol:
            violations["wulff_gage"] += 1
        if abs(m_identity) > tol:
            violations["identity"] += 1
        if m_bonnesen < -tol:
            violations["bonnesen"] += 1
        worst["minkowski"] = min(worst["minkowski"], m_minkowski)
        worst["wulff_gage"] = min(worst["wulff_gage"], m_gage)
        worst["identity"] = max(worst["identity"], abs(m_identity))
        worst["bonnesen"] = min(worst["bonnesen"], m_bonnesen)

    total = sum(violations.values())
    print(f"check: trials={trials} seed={spec.seed if seed is None else seed} "
          f"N={profile.grid_n} symmetric={profile.symmetric}")
    print("  violations: " + " ".join(f"{k}={v}" for k, v in violations.items()))
    print("  worst margins: "
          f"minkowski={worst['minkowski']:.3e} "
          f"wulff_gage={worst['wulff_gage']:.3e} "
          f"identity=|{worst['identity']:.3e}| "
          f"bonnesen={worst['bonnesen']:.3e}")
    if total:
        print(f"  FAILED: {total} violations")
        return 2
    print("  all inequalities hold")
    return 0


def _sweep_one(args: tuple[str, list[str], str]) -> tuple[str, int]:
    path, overrides, value = args
    try:
        spec = _load_spec(path, overrides)
        code = _cmd_run(spec)
    except (ParseError, ValidationError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        code = 1
    except _RUNTIME_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        code = 2
    return value, code


def _cmd_sweep(path: str, overrides: list[str], param: str, values: str,
               parallel: bool) -> int:
    if "." not in param:
        raise ValidationError(f"--param must be SECTION.KEY, got {param!r}")
    vals = [v.strip() for v in values.split(",") if v.strip()]
    if not vals:
        raise ValidationError("--values is empty")
    base_spec = _load_spec(path, overrides)  # validate shared config up front
    jobs = []
    for v in vals:
        subdir = base_spec.out_dir / f"{param.split('.', 1)[1]}={v}"
        ov = list(overrides) + [f"{param}={v}", f"output.dir={subdir}"]
        jobs.append((path, ov, v))

    if parallel:
        with ProcessPoolExecutor() as pool:
            results = list(pool.map(_sweep_one, jobs))
    else:
        results = [_sweep_one(j) for j in jobs]
    worst = 0
    for value, code in results:
        print(f"sweep {param}={value}: exit {code}")
        worst = max(worst, code)
    return worst


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sweep":
            return _cmd_sweep(args.config, args.override, args.param,
                              args.values, args.parallel)
        spec = _load_spec(args.config, args.override)
        if args.command == "run":
            return _cmd_run(spec)
        if args.command == "wulff":
            return _cmd_wulff(spec)
        if args.command == "check":
            return _cmd_check(spec, args.trials, args.seed)
        raise AssertionError(f"unhandled command {args.command}")
    except (ParseError, ValidationError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except AnisoflowError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())
