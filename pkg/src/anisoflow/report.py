"""Render run diagnostics as figure files next to the CSV output."""

from __future__ import annotations

from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .anisotropy import AnisotropyProfile  # noqa: E402
from .curve import CurveState, center, reconstruct_points  # noqa: E402
from .diagnostics import _centered_limit_points  # noqa: E402
from .errors import IoError  # noqa: E402
from .flow import Trajectory  # noqa: E402


def _save(fig, path: Path) -> None:
    try:
        fig.savefig(path, dpi=150, bbox_inches="tight")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    finally:
        plt.close(fig)


def render_report(trajectory: Trajectory, profile: AnisotropyProfile,
                  initial: CurveState, out_dir) -> list[Path]:
    """Write the four standard figures; returns the created paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    recs = trajectory.records
    t = np.array([r.t for r in recs])
    l0 = trajectory.aniso_length0
    at = profile.wulff_area
    written = []

    # Shapes: initial, final and the scaled Wulff limit, Steiner-centered.
    fig, ax = plt.subplots(figsize=(5, 5))
    for state, label, style in ((initial, "initial", "-"),
                                (trajectory.final_state, "final", "-")):
        pts = reconstruct_points(center(state))
        ring = np.vstack((pts, pts[:1]))
        ax.plot(ring[:, 0], ring[:, 1], style, label=label)
    limit = _centered_limit_points(profile, l0)
    ring = np.vstack((limit, limit[:1]))
    ax.plot(ring[:, 0], ring[:, 1], "--", label="scaled Wulff limit")
    ax.set_aspect("equal")
    ax.legend(loc="upper right", fontsize=8)
    ax.set_title("curve evolution")
    p = out / "shapes.png"
    _save(fig, p)
    written.append(p)

    # Deficit against the exponential envelope.
    fig, ax = plt.subplots(figsize=(6, 4))
    d = np.array([r.deficit for r in recs])
    rate = 8.0 * at * at / (l0 * l0)
    env = max(d[0], 0.0) * np.exp(-rate * (t - t[0]))
    floor = 1e-16
    ax.semilogy(t, np.maximum(d, floor), label="deficit")
    ax.semilogy(t, np.maximum(env, floor), "--", label=f"envelope, rate {rate:.3g}")
    ax.set_xlabel("t")
    ax.set_ylabel("anisoperimetric deficit")
    ax.legend(fontsize=8)
    p = out / "deficit.png"
    _save(fig, p)
    written.append(p)

    # Conserved energy drift and area growth.
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    drift = np.abs(np.array([r.aniso_length for r in recs]) - l0) / l0
    ax1.semilogy(t, np.maximum(drift, 1e-18))
    ax1.set_xlabel("t")
    ax1.set_ylabel("|L(t) - L(0)| / L(0)")
    ax2.plot(t, [r.area for r in recs])
    ax2.set_xlabel("t")
    ax2.set_ylabel("area")
    fig.suptitle("conservation and area growth", fontsize=10)
    p = out / "conservation.png"
    _save(fig, p)
    written.append(p)

    # Anisotropic curvature band around the limit value.
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    ax1.plot(t, [r.k_max for r in recs], label="max K")
    ax1.plot(t, [r.k_min for r in recs], label="min K")
    ax1.axhline(2.0 * at / l0, color="k", ls="--", lw=0.8, label="2A/L(0)")
    ax1.set_xlabel("t")
    ax1.legend(fontsize=8)
    kd = np.array([r.k_dev for r in recs])
    ax2.semilogy(t, np.maximum(kd, 1e-18))
    ax2.set_xlabel("t")
    ax2.set_ylabel("sup |K - 2A/L(0)|")
    fig.suptitle("anisotropic curvature convergence", fontsize=10)
    p = out / "curvature.png"
    _save(fig, p)
    written.append(p)

    return written
