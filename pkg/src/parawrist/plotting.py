"""Figures for the sweep, trajectory and workspace reports.

Everything renders off-screen and writes straight to a file; the format
follows the file extension (png, pdf, svg).
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 150,
    # fixed metadata so repeated runs give identical files
    "svg.hashsalt": "parawrist",
}


def _figure(nrows=1, ncols=1, width=6.0, height=None):
    height = height or width * (math.sqrt(5.0) - 1.0) / 2.0
    return plt.subplots(nrows=nrows, ncols=ncols, figsize=(width, height), squeeze=False)


_NO_STAMP = {"png": {"Software": None}, "pdf": {"CreationDate": None}, "svg": {"Date": None}}


def _save(fig, path):
    fig.tight_layout()
    fmt = str(path).rsplit(".", 1)[-1].lower()
    fig.savefig(path, metadata=_NO_STAMP.get(fmt))
    plt.close(fig)


def plot_sweep(report, path, extra=None):
    """Max error and RMSE against step size on log-log axes.

    ``extra`` is an optional mapping ``label -> SweepReport`` drawn alongside.
    """
    with plt.rc_context(STYLE):
        fig, axes = _figure()
        ax = axes[0, 0]
        series = {"default": report}
        series.update(extra or {})
        for (label, rep), color in zip(series.items(), plt.rcParams["axes.prop_cycle"].by_key()["color"]):
            ax.loglog(rep.steps, rep.rmse, "o-", color=color, label=f"RMSE ({label})")
            ax.loglog(rep.steps, rep.max_error, "s--", color=color, alpha=0.6, label=f"max ({label})")
            ax.axvline(rep.argmin_step, color=color, lw=0.8, ls=":")
        ax.set_xlabel(r"step $\Delta\theta$ [rad]")
        ax.set_ylabel("Jacobian error [rad/rad]")
        ax.legend()
        _save(fig, path)


def plot_tracking(samples, path, title=None):
    """Commanded against delayed pitch and roll over time."""
    t = np.array([s.t for s in samples])
    cmd = np.array([s.pose_cmd for s in samples])
    has_state = samples[0].pose_state is not None
    state = np.array([s.pose_state for s in samples]) if has_state else None
    with plt.rc_context(STYLE):
        fig, axes = _figure(nrows=2, height=4.5)
        for ax, idx, name in ((axes[0, 0], 1, "pitch"), (axes[1, 0], 2, "roll")):
            ax.plot(t, cmd[:, idx], label=f"{name} command")
            if has_state:
                ax.plot(t, state[:, idx], "--", label=f"{name} state")
            ax.set_ylabel(f"{name} [rad]")
            ax.legend(loc="upper right")
        axes[1, 0].set_xlabel("t [s]")
        if title:
            axes[0, 0].set_title(title)
        _save(fig, path)


def plot_workspace(nodes, path, limit_radius=0.7):
    """Feasible grid nodes over the (pitch, roll) plane with the tilt limit circle."""
    beta = np.array([n.beta for n in nodes])
    gamma = np.array([n.gamma for n in nodes])
    ok = np.array([n.feasible for n in nodes])
    ik_fail = np.array([n.reason == "ik-failure" for n in nodes])
    with plt.rc_context(STYLE):
        fig, axes = _figure(width=5.0, height=5.0)
        ax = axes[0, 0]
        ax.scatter(beta[ok], gamma[ok], s=6, c="tab:green", label="feasible")
        ax.scatter(beta[~ok & ~ik_fail], gamma[~ok & ~ik_fail], s=6, c="lightgray", label="outside limit")
        if ik_fail.any():
            ax.scatter(beta[ik_fail], gamma[ik_fail], s=6, c="tab:red", label="IK failure")
        w = np.linspace(0.0, 2.0 * math.pi, 361)
        ax.plot(limit_radius * np.cos(w), limit_radius * np.sin(w), "k-", lw=0.8)
        ax.set_aspect("equal")
        ax.set_xlabel(r"pitch $\beta$ [rad]")
        ax.set_ylabel(r"roll $\gamma$ [rad]")
        ax.legend(loc="upper right")
        _save(fig, path)
