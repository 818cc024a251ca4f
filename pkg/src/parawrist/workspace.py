"""Reachable attitude region, circular test trajectory and transport-delay tracking."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidInput, UnreachablePose, WorkspaceLimitViolation, WristError
from .geometry import StructuralParams, default_params
from .kinematics import DEFAULT_SOLVER, SolverConfig, solve_fk, solve_ik
from .rotation import PlatformPose, wrap_angle

DEFAULT_LIMIT_RADIUS = 0.7
DEFAULT_AMPLITUDE = 0.68
GRID_HALF_WIDTH = 0.8


@dataclass(frozen=True)
class WorkspaceLimit:
    """Tilt bound ``beta**2 + gamma**2 < radius**2`` (strict)."""

    radius: float = DEFAULT_LIMIT_RADIUS

    def __post_init__(self):
        if not self.radius > 0.0:
            raise InvalidInput("workspace radius must be > 0")

    def admits(self, beta: float, gamma: float) -> bool:
        return beta * beta + gamma * gamma < self.radius * self.radius


DEFAULT_LIMIT = WorkspaceLimit()


class Reachability(NamedTuple):
    reachable: bool
    reason: str  # "ok", "workspace-limit" or "ik-failure"
    detail: str = ""

    def __bool__(self):
        return self.reachable


def is_reachable(
    pose,
    limit: WorkspaceLimit = DEFAULT_LIMIT,
    params: StructuralParams | None = None,
) -> Reachability:
    alpha, beta, gamma = (float(v) for v in pose)
    if not limit.admits(beta, gamma):
        tilt = math.hypot(beta, gamma)
        return Reachability(False, "workspace-limit", f"tilt {tilt:.6g} rad >= limit {limit.radius:g} rad")
    try:
        solve_ik(params or default_params(), (alpha, beta, gamma))
    except UnreachablePose as exc:
        return Reachability(False, "ik-failure", str(exc))
    return Reachability(True, "ok")


def check_reachable(pose, limit: WorkspaceLimit = DEFAULT_LIMIT, params: StructuralParams | None = None) -> None:
    """Raise instead of returning a diagnostic; used by the CLI."""
    result = is_reachable(pose, limit, params)
    if result.reason == "workspace-limit":
        raise WorkspaceLimitViolation(result.detail)
    if not result:
        raise UnreachablePose(result.detail)


@dataclass(frozen=True)
class TrajectorySpec:
    amplitude: float = DEFAULT_AMPLITUDE
    period: float = 4.0
    sample_rate: float = 100.0
    cycles: int = 1
    limit: WorkspaceLimit = DEFAULT_LIMIT

    def __post_init__(self):
        if not (0.0 <= self.amplitude < self.limit.radius):
            raise InvalidInput(f"amplitude must lie in [0, {self.limit.radius:g})")
        if not self.period > 0.0:
            raise InvalidInput("period must be > 0")
        if not self.sample_rate > 0.0:
            raise InvalidInput("sample_rate must be > 0")
        if self.cycles < 1:
            raise InvalidInput("cycles must be >= 1")

    @property
    def sample_count(self) -> int:
        # closed interval [0, cycles * period]
        return int(round(self.cycles * self.period * self.sample_rate)) + 1

    def times(self) -> np.ndarray:
        return np.arange(self.sample_count) / self.sample_rate

    def command(self, t) -> np.ndarray:
        """Commanded (alpha, beta, gamma) at time(s) ``t``; columns for array input."""
        t = np.asarray(t, dtype=float)
        w = 2.0 * math.pi * t / self.period
        return np.stack([np.zeros_like(w), self.amplitude * np.cos(w), self.amplitude * np.sin(w)], axis=-1)


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    pose_cmd: PlatformPose
    theta_cmd: np.ndarray
    phi_cmd: np.ndarray
    fk_iterations: int
    pose_state: PlatformPose | None = None


def circular_trajectory(
    spec: TrajectorySpec,
    params: StructuralParams | None = None,
    cfg: SolverConfig = DEFAULT_SOLVER,
    verify: bool = True,
) -> list[TrajectorySample]:
    """Sample the tilt circle ``beta = A cos(wt), gamma = A sin(wt)``, ``alpha = 0``.

    Starts at ``(beta, gamma) = (A, 0)`` and runs counterclockwise.  Motor
    commands come from closed-form IK.  With ``verify`` each command is fed
    back through FK, warm-started from the previous sample's arc angles, and
    must reproduce the commanded pose to 1e-9 rad.
    """
    params = params or default_params()
    samples = []
    phi_prev = None
    for t, cmd in zip(spec.times(), spec.command(spec.times())):
        pose = PlatformPose(*(float(v) for v in cmd))
        try:
            ik = solve_ik(params, pose)
        except UnreachablePose as exc:
            raise WristError(f"IK failed on the trajectory at t={t:.6g} s: {exc}") from exc
        iterations = 0
        if verify:
            fk = solve_fk(params, ik.theta, cfg, phi0=phi_prev)
            err = np.abs(wrap_angle(fk.pose.as_array() - cmd)).max()
            if err > 1e-9:
                raise WristError(f"FK round trip off by {err:.3e} rad at t={t:.6g} s")
            iterations = fk.iterations
            phi_prev = fk.phi
        samples.append(
            TrajectorySample(t=float(t), pose_cmd=pose, theta_cmd=ik.theta, phi_cmd=ik.phi, fk_iterations=iterations)
        )
    return samples


@dataclass(frozen=True)
class TrackingErrorReport:
    delay: float
    crossing_times: list[float]
    crossing_errors: list[float]
    zero_crossing_error: float
    max_error: float
    rmse: float

    def to_dict(self) -> dict:
        return {
            "delay": self.delay,
            "zero_crossing_error": self.zero_crossing_error,
            "max_error": self.max_error,
            "rmse": self.rmse,
            "crossings": [{"t": t, "error": e} for t, e in zip(self.crossing_times, self.crossing_errors)],
        }


def delay_error_closed_form(amplitude: float, period: float, delay: float) -> float:
    """Chord between the commanded and delayed points on the tilt circle."""
    return 2.0 * amplitude * math.sin(math.pi * delay / period)


def _delayed(times, values, delay):
    """Transport delay on uniformly sampled columns; holds the first sample before ``t0 + delay``."""
    if delay == 0.0:
        return values.copy()
    dt = times[1] - times[0] if len(times) > 1 else 1.0
    shift = delay / dt
    k = int(round(shift))
    if abs(shift - k) < 1e-9:
        out = np.empty_like(values)
        out[:k] = values[0]
        out[k:] = values[: len(values) - k]
        return out
    src = np.maximum(times - delay, times[0])
    return np.column_stack([np.interp(src, times, values[:, j]) for j in range(values.shape[1])])


def simulate_tracking(samples: list[TrajectorySample], delay: float) -> tuple[list[TrajectorySample], TrackingErrorReport]:
    """Pure transport delay: ``state(t) = cmd(t - delay)``.

    Errors are magnitudes of the (alpha, beta, gamma) difference.  The
    zero-crossing error is taken where the commanded pitch or roll passes
    through 0, skipping crossings inside the initial ``delay`` window where
    the state is still held at the first command.
    """
    if delay < 0.0:
        raise InvalidInput("delay must be >= 0")
    if len(samples) < 2:
        raise InvalidInput("need at least two samples")
    times = np.array([s.t for s in samples])
    steps = np.diff(times)
    if np.any(steps <= 0.0) or np.ptp(steps) > 1e-9 * steps.mean():
        raise InvalidInput("samples must be uniformly spaced in time")
    cmd = np.array([s.pose_cmd for s in samples], dtype=float)
    state = _delayed(times, cmd, delay)
    err = np.linalg.norm(wrap_angle(cmd - state), axis=1)

    amplitude = float(np.max(np.hypot(cmd[:, 1], cmd[:, 2])))
    zero_tol = 1e-12 * max(amplitude, 1.0)
    crossing_t, crossing_e = [], []
    for axis in (1, 2):
        x = cmd[:, axis]
        for k in range(len(times)):
            if times[k] < times[0] + delay - 1e-12:
                continue
            if abs(x[k]) <= zero_tol:
                crossing_t.append(float(times[k]))
                crossing_e.append(float(err[k]))
            elif k + 1 < len(times) and abs(x[k + 1]) > zero_tol and x[k] * x[k + 1] < 0.0:
                frac = x[k] / (x[k] - x[k + 1])
                crossing_t.append(float(times[k] + frac * (times[k + 1] - times[k])))
                crossing_e.append(float(err[k] + frac * (err[k + 1] - err[k])))
    order = np.argsort(crossing_t, kind="stable")
    crossing_t = [crossing_t[i] for i in order]
    crossing_e = [crossing_e[i] for i in order]

    report = TrackingErrorReport(
        delay=float(delay),
        crossing_times=crossing_t,
        crossing_errors=crossing_e,
        zero_crossing_error=float(np.mean(crossing_e)) if crossing_e else 0.0,
        max_error=float(err.max()),
        rmse=float(np.sqrt(np.mean(err**2))),
    )
    tracked = [
        TrajectorySample(
            t=s.t,
            pose_cmd=s.pose_cmd,
            theta_cmd=s.theta_cmd,
            phi_cmd=s.phi_cmd,
            fk_iterations=s.fk_iterations,
            pose_state=PlatformPose(*(float(v) for v in row)),
        )
        for s, row in zip(samples, state)
    ]
    return tracked, report


def trajectory_csv(samples: list[TrajectorySample]) -> str:
    with_state = any(s.pose_state is not None for s in samples)
    header = ["t", "alpha_cmd", "beta_cmd", "gamma_cmd", "theta1", "theta2", "theta3"]
    if with_state:
        header += ["alpha_state", "beta_state", "gamma_state"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for s in samples:
        row = [s.t, *s.pose_cmd, *s.theta_cmd]
        if with_state:
            row += list(s.pose_state)
        writer.writerow([f"{v:.9g}" for v in row])
    return buf.getvalue()


class WorkspaceNode(NamedTuple):
    beta: float
    gamma: float
    feasible: bool
    alpha_min: float
    alpha_max: float
    reason: str


def _alpha_bound(params, beta, gamma, direction, tol):
    """Bisect for the last feasible yaw from 0 towards ``direction * pi``."""
    far = direction * math.pi
    if _ik_ok(params, far, beta, gamma):
        return far
    lo, hi = 0.0, far
    while abs(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        if _ik_ok(params, mid, beta, gamma):
            lo = mid
        else:
            hi = mid
    return lo


def _ik_ok(params, alpha, beta, gamma) -> bool:
    try:
        solve_ik(params, (alpha, beta, gamma))
    except UnreachablePose:
        return False
    return True


def grid_axis(resolution: float, half_width: float = GRID_HALF_WIDTH) -> np.ndarray:
    """Nodes ``k * resolution`` within ``[-half_width, half_width]``, symmetric about 0."""
    if not resolution > 0.0:
        raise InvalidInput("grid resolution must be > 0")
    n = int(math.floor(half_width / resolution + 1e-9))
    return np.round(np.arange(-n, n + 1) * resolution, 12)


def sample_workspace(
    params: StructuralParams | None = None,
    grid_resolution: float = 0.05,
    limit: WorkspaceLimit = DEFAULT_LIMIT,
    alpha_tol: float = 1e-6,
) -> list[WorkspaceNode]:
    """Reachability map over ``beta, gamma`` in ``[-0.8, 0.8]``.

    A node is feasible when it satisfies the tilt limit and IK succeeds at
    ``alpha = 0``.  For feasible nodes the yaw interval around 0 over which
    IK keeps succeeding is located by bisection (searched up to +-pi).
    Output is ordered by (beta, gamma).
    """
    params = params or default_params()
    axis = grid_axis(grid_resolution)
    nodes = []
    for beta in axis:
        for gamma in axis:
            b, g = float(beta), float(gamma)
            if not limit.admits(b, g):
                nodes.append(WorkspaceNode(b, g, False, math.nan, math.nan, "workspace-limit"))
                continue
            if not _ik_ok(params, 0.0, b, g):
                nodes.append(WorkspaceNode(b, g, False, math.nan, math.nan, "ik-failure"))
                continue
            a_min = _alpha_bound(params, b, g, -1.0, alpha_tol)
            a_max = _alpha_bound(params, b, g, 1.0, alpha_tol)
            nodes.append(WorkspaceNode(b, g, True, a_min, a_max, "ok"))
    return nodes


def workspace_csv(nodes: list[WorkspaceNode]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["beta", "gamma", "feasible", "alpha_min", "alpha_max"])
    for n in nodes:
        writer.writerow(
            [f"{n.beta:.9g}", f"{n.gamma:.9g}", int(n.feasible), f"{n.alpha_min:.9g}", f"{n.alpha_max:.9g}"]
        )
    return buf.getvalue()


def workspace_summary(nodes: list[WorkspaceNode]) -> dict:
    feasible = [n for n in nodes if n.feasible]
    ik_only = sum(1 for n in nodes if n.reason == "ik-failure")
    return {
        "nodes": len(nodes),
        "feasible": len(feasible),
        "feasible_fraction": len(feasible) / len(nodes) if nodes else 0.0,
        "max_feasible_radius": max((math.hypot(n.beta, n.gamma) for n in feasible), default=0.0),
        "ik_failures_inside_limit": ik_only,
    }
