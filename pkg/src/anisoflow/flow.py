"""Time integration of the nonlocal support-function evolution.

The support function obeys dp/dt = -ptilde * (K - lam/(2*Atilde)) where
K = phi/(p + p'') is the anisotropic curvature and lam is the nonlocal
multiplier that makes the anisotropic length an exact invariant of the
semi-discrete system: pairing the right-hand side against phi in the
uniform-grid inner product cancels identically because the spectral second
derivative is self-adjoint there.

Space is discretized by Fourier collocation, time by classical RK4 with
the nonlocal multiplier re-evaluated inside every stage; freezing it over
a step would degrade the conservation of the anisotropic length to first
order.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field

import numpy as np

from .anisotropy import AnisotropyProfile
from .curve import EPS_CONVEX, CurveState, spectral_derivative
from .diagnostics import DiagnosticsRecord, make_record
from .errors import ConvexityLost, NonFiniteState


@dataclass
class FlowConfig:
    """Grid size, step-size policy and stop criteria for one run."""

    grid_n: int = 256
    t_end: float = 10.0
    safety: float = 0.25
    dt_max: float = 1e-2
    conv_tol: float = 1e-5
    renormalize: bool = False
    record_every: int = 200

    def __post_init__(self):
        if self.grid_n < 16 or self.grid_n % 2 != 0:
            raise ValueError("grid_n must be even and >= 16")
        if not (0.0 < self.safety <= 1.0):
            raise ValueError("safety must lie in (0, 1]")
        if self.t_end < 0 or self.dt_max <= 0 or self.conv_tol <= 0:
            raise ValueError("t_end, dt_max and conv_tol must be positive")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")


@dataclass
class Trajectory:
    """Recorded time series plus stored states at requested times."""

    records: list[DiagnosticsRecord] = field(default_factory=list)
    snapshots: list[tuple[float, CurveState]] = field(default_factory=list)
    aniso_length0: float = 0.0
    n_steps: int = 0
    stop_reason: str = ""

    @property
    def final_state(self) -> CurveState:
        return self.snapshots[-1][1]


class _StageAux:
    """Byproducts of one right-hand-side evaluation."""

    __slots__ = ("rho", "kappa_a", "lam", "f")

    def __init__(self, rho, kappa_a, lam, f):
        self.rho = rho
        self.kappa_a = kappa_a
        self.lam = lam
        self.f = f


_pt_phi_cache: "weakref.WeakKeyDictionary[AnisotropyProfile, np.ndarray]" = (
    weakref.WeakKeyDictionary())


def _pt_phi(profile: AnisotropyProfile) -> np.ndarray:
    prod = _pt_phi_cache.get(profile)
    if prod is None:
        prod = profile.p_tilde * profile.phi
        _pt_phi_cache[profile] = prod
    return prod


_d2_mult_cache: dict[int, np.ndarray] = {}


def _d2(p: np.ndarray) -> np.ndarray:
    # Same operator as curve.spectral_derivative(p, 2), multiplier cached.
    n = len(p)
    mult = _d2_mult_cache.get(n)
    if mult is None:
        k = np.arange(n // 2 + 1, dtype=float)
        mult = -(k * k)
        _d2_mult_cache[n] = mult
    return np.fft.irfft(np.fft.rfft(p) * mult, n)


def _eval_stage(p: np.ndarray, profile: AnisotropyProfile, t: float) -> _StageAux:
    rho = p + _d2(p)
    m = rho.min()
    if m <= EPS_CONVEX:
        raise ConvexityLost(f"min(p + p'') = {m:.6g} at t = {t:.9g}")
    kappa_a = profile.phi / rho
    h = 2.0 * np.pi / len(p)
    lam = h * float(np.dot(_pt_phi(profile), kappa_a))
    f = profile.p_tilde * (lam / (2.0 * profile.wulff_area) - kappa_a)
    return _StageAux(rho, kappa_a, lam, f)


def lambda_forcing(state: CurveState, profile: AnisotropyProfile) -> float:
    """Nonlocal multiplier: integral of ptilde * K^2 over arc length."""
    return _eval_stage(state.p, profile, state.time).lam


def rhs(state: CurveState, profile: AnisotropyProfile) -> np.ndarray:
    """dp/dt samples: -ptilde * (K - lam/(2*Atilde))."""
    return _eval_stage(state.p, profile, state.time).f


def stable_dt(state: CurveState, profile: AnisotropyProfile, cfg: FlowConfig) -> float:
    """Explicit step-size bound safety / (D * (n/2)^2).

    D is the largest linearized diffusion coefficient ptilde * phi * kappa^2
    of the support-function equation.
    """
    aux = _eval_stage(state.p, profile, state.time)
    return _dt_from_aux(aux, profile, cfg)


def _dt_from_aux(aux: _StageAux, profile: AnisotropyProfile, cfg: FlowConfig) -> float:
    diff = float(np.max(_pt_phi(profile) / (aux.rho * aux.rho)))
    k_max = profile.grid_n // 2
    return min(cfg.dt_max, cfg.safety / (diff * k_max * k_max))


def _rk4(p: np.ndarray, t: float, dt: float, profile: AnisotropyProfile,
         k1: _StageAux | None = None) -> np.ndarray:
    a1 = k1 if k1 is not None else _eval_stage(p, profile, t)
    a2 = _eval_stage(p + 0.5 * dt * a1.f, profile, t)
    a3 = _eval_stage(p + 0.5 * dt * a2.f, profile, t)
    a4 = _eval_stage(p + dt * a3.f, profile, t)
    return p + (dt / 6.0) * (a1.f + 2.0 * a2.f + 2.0 * a3.f + a4.f)


def step(state: CurveState, profile: AnisotropyProfile, dt: float) -> CurveState:
    """One classical RK4 update of the support function.

    The nonlocal multiplier is recomputed inside each stage.  Raises
    ConvexityLost if any stage leaves the convex cone.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    return state.with_p(_rk4(state.p, state.time, dt, profile), state.time + dt)


def run(initial: CurveState, profile: AnisotropyProfile, cfg: FlowConfig,
        snapshot_times: tuple[float, ...] = ()) -> Trajectory:
    """Integrate until t_end or until sup|K - 2*Atilde/L0| < conv_tol.

    Emits a diagnostics record at t = 0, every record_every accepted steps
    and at the final time.  Snapshot states are stored at the first
    accepted time reaching each requested time, and always at the end.
    On ConvexityLost the partial trajectory is attached to the exception.
    """
    if initial.grid_n != cfg.grid_n:
        raise ValueError(
            f"initial state has n = {initial.grid_n}, config expects {cfg.grid_n}")
    if initial.grid_n != profile.grid_n:
        raise ValueError("initial state and profile grids differ")

    h = 2.0 * np.pi / cfg.grid_n
    rho0 = initial.p + spectral_derivative(initial.p, 2)
    l0 = h * float(np.sum(profile.p_tilde * rho0))
    target = 2.0 * profile.wulff_area / l0
    t_stop = cfg.t_end - 1e-12 * max(1.0, cfg.t_end)

    traj = Trajectory(aniso_length0=l0)
    traj.records.append(make_record(initial, profile, l0))

    pending = sorted(t for t in snapshot_times)
    while pending and pending[0] <= initial.time:
        pending.pop(0)
        if not traj.snapshots:
            traj.snapshots.append((initial.time, initial))

    p = np.array(initial.p, dtype=float)
    t = initial.time
    while True:
        if not np.isfinite(p).all():
            raise NonFiniteState(f"non-finite support sample at t = {t:.9g}")
        try:
            aux = _eval_stage(p, profile, t)
        except ConvexityLost as err:
            err.trajectory = traj
            raise
        k_dev = float(np.max(np.abs(aux.kappa_a - target)))
        if k_dev < cfg.conv_tol:
            traj.stop_reason = "converged"
            break
        if t >= t_stop:
            traj.stop_reason = "t_end"
            break

        dt = min(_dt_from_aux(aux, profile, cfg), cfg.t_end - t)
        try:
            p = _rk4(p, t, dt, profile, k1=aux)
        except ConvexityLost as err:
            err.trajectory = traj
            raise
        t += dt
        traj.n_steps += 1

        if cfg.renormalize:
            rho = p + spectral_derivative(p, 2)
            cur = h * float(np.sum(profile.p_tilde * rho))
            p = p * (l0 / cur)

        if traj.n_steps % cfg.record_every == 0:
            traj.records.append(make_record(CurveState(p, t), profile, l0))
        if pending and t >= pending[0]:
            while pending and t >= pending[0]:
                pending.pop(0)
            traj.snapshots.append((t, CurveState(p, t)))

    final = CurveState(p, t)
    if traj.records[-1].t < t:
        traj.records.append(make_record(final, profile, l0))
    if not traj.snapshots or traj.snapshots[-1][0] < t:
        traj.snapshots.append((t, final))
    return traj
