"""Config ingestion, time-series persistence and snapshot rendering.

A run is reproducible from a single INI-style document with sections
[anisotropy], [initial], [flow] and [output].  Coefficients use one key
per harmonic: ``a0 = 1.0`` plus ``h<k> = <cos>[, <sin>]``.

The time series is written as CSV with a fixed header and 12+ significant
digits so downstream checks at 1e-10 tolerances survive the round trip.
Snapshots are standalone SVGs holding exactly two closed paths (the
Steiner-centered curve and the scaled Wulff limit candidate) plus one
text label.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .anisotropy import AnisotropyProfile, build_profile, grid_angles
from .curve import CurveState, center, curvature, reconstruct_points, state_from_coeffs
from .diagnostics import _centered_limit_points, hausdorff_distance
from .errors import (
    AnisoflowError,
    ConvexityLost,
    IoError,
    ParseError,
    ValidationError,
)
from .flow import FlowConfig, Trajectory
from .trig import TrigPolynomial

CSV_HEADER = ("t,aniso_length,area,lambda,deficit,k_min,k_max,k_dev,"
              "r_in_w,r_out_w,hausdorff,margin_minkowski,margin_wulff_gage,"
              "margin_bonnesen,margin_lambda_lo,margin_lambda_hi")

_HARMONIC_KEY = re.compile(r"^h([1-9][0-9]*)$")

_FLOW_KEYS = {"n", "t_end", "safety", "dt_max", "conv_tol", "renormalize",
              "record_every", "seed"}
_OUTPUT_KEYS = {"dir", "timeseries", "snapshot_times", "figures"}
_ANISO_KEYS = {"a0", "allow_asymmetric"}
_INITIAL_KEYS = {"a0"}


@dataclass
class RunSpec:
    """Everything needed to reproduce one run."""

    anisotropy: TrigPolynomial
    initial: TrigPolynomial
    flow: FlowConfig
    allow_asymmetric: bool = False
    out_dir: Path = Path("out")
    timeseries_name: str = "timeseries.csv"
    snapshot_times: tuple[float, ...] = ()
    figures: bool = True
    seed: int = 0

    def build_profile(self) -> AnisotropyProfile:
        return build_profile(self.anisotropy, self.flow.grid_n,
                             require_symmetry=not self.allow_asymmetric)

    def build_initial(self) -> CurveState:
        return state_from_coeffs(self.initial, self.flow.grid_n)


def _parse_coeffs(section, name: str) -> TrigPolynomial:
    known = _ANISO_KEYS if name == "anisotropy" else _INITIAL_KEYS
    a0 = None
    harmonics = []
    for key, raw in section.items():
        m = _HARMONIC_KEY.match(key)
        if m:
            parts = [p.strip() for p in raw.split(",")]
            if len(parts) not in (1, 2):
                raise ValidationError(
                    f"[{name}] {key}: expected '<cos>' or '<cos>, <sin>', got {raw!r}")
            try:
                ak = float(parts[0])
                bk = float(parts[1]) if len(parts) == 2 else 0.0
            except ValueError as exc:
                raise ValidationError(f"[{name}] {key}: {exc}") from exc
            harmonics.append((int(m.group(1)), ak, bk))
        elif key == "a0":
            try:
                a0 = float(raw)
            except ValueError as exc:
                raise ValidationError(f"[{name}] a0: {exc}") from exc
        elif key not in known:
            raise ValidationError(f"unknown key [{name}] {key}")
    if a0 is None:
        raise ValidationError(f"[{name}] must define a0")
    try:
        return TrigPolynomial(a0, tuple(harmonics))
    except ValueError as exc:
        raise ValidationError(f"[{name}]: {exc}") from exc


def _get(section, key, conv, default):
    if section is None or key not in section:
        return default
    raw = section[key]
    try:
        if conv is bool:
            lowered = raw.strip().lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        return conv(raw)
    except ValueError as exc:
        raise ValidationError(f"{key}: {exc}") from exc


def parse_config(text: str, overrides: tuple[str, ...] = ()) -> RunSpec:
    """Parse and validate a config document into a RunSpec.

    Overrides are ``section.key=value`` strings applied after the document
    is read; they win over document values.  Raises ParseError for
    malformed documents and ValidationError naming the violated invariant
    (anisotropy and initial-curve problems surface here so a bad run never
    starts).
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ParseError(str(exc)) from exc

    for ov in overrides:
        key, sep, value = ov.partition("=")
        section, _, name = key.strip().partition(".")
        if not sep or not name:
            raise ValidationError(f"override must be SECTION.KEY=VALUE, got {ov!r}")
        if section not in ("anisotropy", "initial", "flow", "output"):
            raise ValidationError(f"override references unknown section [{section}]")
        if not cp.has_section(section):
            cp.add_section(section)
        cp[section][name.strip()] = value.strip()

    for sec in cp.sections():
        if sec not in ("anisotropy", "initial", "flow", "output"):
            raise ValidationError(f"unknown section [{sec}]")
    for sec in ("anisotropy", "initial"):
        if not cp.has_section(sec):
            raise ValidationError(f"missing section [{sec}]")

    aniso = _parse_coeffs(cp["anisotropy"], "anisotropy")
    initial = _parse_coeffs(cp["initial"], "initial")
    allow_asym = _get(cp["anisotropy"], "allow_asymmetric", bool, False)

    fsec = cp["flow"] if cp.has_section("flow") else None
    if fsec is not None:
        for key in fsec:
            if key not in _FLOW_KEYS:
                raise ValidationError(f"unknown key [flow] {key}")
    try:
        flow_cfg = FlowConfig(
            grid_n=_get(fsec, "n", int, 256),
            t_end=_get(fsec, "t_end", float, 10.0),
            safety=_get(fsec, "safety", float, 0.25),
            dt_max=_get(fsec, "dt_max", float, 1e-2),
            conv_tol=_get(fsec, "conv_tol", float, 1e-5),
            renormalize=_get(fsec, "renormalize", bool, False),
            record_every=_get(fsec, "record_every", int, 200),
        )
    except ValueError as exc:
        raise ValidationError(f"[flow]: {exc}") from exc
    seed = _get(fsec, "seed", int, 0)

    osec = cp["output"] if cp.has_section("output") else None
    if osec is not None:
        for key in osec:
            if key not in _OUTPUT_KEYS:
                raise ValidationError(f"unknown key [output] {key}")
    out_dir = Path(_get(osec, "dir", str, "out"))
    timeseries = _get(osec, "timeseries", str, "timeseries.csv")
    figures = _get(osec, "figures", bool, True)
    snap_raw = _get(osec, "snapshot_times", str, "")
    snapshot_times: tuple[float, ...] = ()
    if snap_raw.strip():
        try:
            snapshot_times = tuple(float(v) for v in snap_raw.split(","))
        except ValueError as exc:
            raise ValidationError(f"snapshot_times: {exc}") from exc
    for st in snapshot_times:
        if not (0.0 <= st <= flow_cfg.t_end):
            raise ValidationError(
                f"snapshot time {st:g} outside [0, t_end = {flow_cfg.t_end:g}]")

    spec = RunSpec(
        anisotropy=aniso, initial=initial, flow=flow_cfg,
        allow_asymmetric=allow_asym, out_dir=out_dir,
        timeseries_name=timeseries, snapshot_times=snapshot_times,
        figures=figures, seed=seed,
    )

    # Surface geometry invariants now, with the error constant in the message.
    try:
        spec.build_profile()
    except AnisoflowError as exc:
        raise ValidationError(f"{type(exc).__name__}: {exc}") from exc
    try:
        curvature(spec.build_initial())
    except ConvexityLost as exc:
        raise ValidationError(f"ConvexityLost: initial curve: {exc}") from exc
    return spec


def format_value(v: float) -> str:
    """Decimal with 13 significant digits (exceeds the 12-digit contract)."""
    return format(v, ".12e")


def write_timeseries(trajectory: Trajectory, path) -> None:
    """Write the recorded time series as CSV with the fixed header."""
    records = getattr(trajectory, "records", trajectory)
    if not records:
        raise ValueError("trajectory has no records")
    lines = [CSV_HEADER]
    for r in records:
        m = r.margins
        row = (r.t, r.aniso_length, r.area, r.lam, r.deficit, r.k_min,
               r.k_max, r.k_dev, r.r_in_w, r.r_out_w, r.hausdorff,
               m.minkowski, m.wulff_gage, m.bonnesen_wulff,
               m.lambda_lo, m.lambda_hi)
        lines.append(",".join(format_value(v) for v in row))
    try:
        Path(path).write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _path_data(points: np.ndarray) -> str:
    # SVG y grows downward; flip so counterclockwise shapes render upright.
    parts = [f"M {points[0, 0]:.6f} {-points[0, 1]:.6f}"]
    parts.extend(f"L {x:.6f} {-y:.6f}" for x, y in points[1:])
    parts.append("Z")
    return " ".join(parts)


def write_snapshot(state: CurveState, profile: AnisotropyProfile,
                   l0: float, path) -> None:
    """Render the centered curve against the scaled Wulff limit as SVG."""
    pts = reconstruct_points(center(state))
    limit = _centered_limit_points(profile, l0)
    hd = hausdorff_distance(pts, limit)

    both = np.vstack((pts, limit))
    lo = both.min(axis=0)
    hi = both.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    pad = 0.05 * span
    x0, y0 = lo[0] - pad, -(hi[1] + pad)
    w = (hi[0] - lo[0]) + 2 * pad
    h = (hi[1] - lo[1]) + 2 * pad
    font = 0.05 * span

    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{x0:.6f} {y0:.6f} {w:.6f} {h:.6f}" '
        f'width="640" height="{640 * h / w:.0f}">\n'
        f'  <path d="{_path_data(pts)}" fill="none" '
        f'stroke="#1f77b4" stroke-width="{0.008 * span:.6f}"/>\n'
        f'  <path d="{_path_data(limit)}" fill="none" stroke="#d62728" '
        f'stroke-width="{0.008 * span:.6f}" '
        f'stroke-dasharray="{0.03 * span:.6f} {0.02 * span:.6f}"/>\n'
        f'  <text x="{x0 + pad:.6f}" y="{y0 + pad + font:.6f}" '
        f'font-size="{font:.6f}" font-family="monospace">'
        f"t={state.time:.6g} hausdorff={hd:.3e}</text>\n"
        f"</svg>\n"
    )
    try:
        Path(path).write_text(svg)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def write_points_csv(points: np.ndarray, profile: AnisotropyProfile, path) -> None:
    """Boundary-point table for the Wulff shape: theta,x,y,ptilde,phi."""
    th = grid_angles(profile.grid_n)
    lines = ["theta,x,y,ptilde,phi"]
    for j in range(profile.grid_n):
        lines.append(",".join(format_value(v) for v in (
            th[j], points[j, 0], points[j, 1],
            profile.p_tilde[j], profile.phi[j])))
    try:
        Path(path).write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
