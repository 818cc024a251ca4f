"""Numerical Jacobian of the forward map ``theta -> (alpha, beta, gamma)``.

Rows are ordered (alpha, beta, gamma), columns (theta1, theta2, theta3).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BranchEscape,
    FkFailure,
    InfeasiblePerturbation,
    InvalidInput,
    SingularMatrix,
    WristError,
)
from .geometry import HOME_THETA, StructuralParams
from .kinematics import DEFAULT_SOLVER, SolverConfig, solve_fk
from .rotation import wrap_angle

DEFAULT_STEPS = tuple(10.0**-k for k in range(1, 8))
ORACLE_STEPS = (1e-3, 5e-4, 2.5e-4)
ORACLE_SOLVER = SolverConfig(tolerance=1e-14, max_iterations=60)
SCHEMES = ("forward", "central")


def _pose(params, theta, cfg, phi0=None):
    sol = solve_fk(params, theta, cfg, phi0=phi0)
    return sol.pose.as_array(), sol.phi


def _perturbed_pose(params, theta, cfg, phi0):
    try:
        return _pose(params, theta, cfg, phi0)[0]
    except BranchEscape as exc:
        raise InfeasiblePerturbation(f"perturbed point {np.round(theta, 12).tolist()} left the branch: {exc}") from exc
    except WristError as exc:
        raise FkFailure(f"forward kinematics failed at {np.round(theta, 12).tolist()}: {exc}") from exc


def jacobian_fd(
    params: StructuralParams,
    theta,
    step: float,
    scheme: str = "forward",
    cfg: SolverConfig = DEFAULT_SOLVER,
    phi0=None,
    base=None,
) -> np.ndarray:
    """Finite-difference Jacobian.

    forward: ``[pose(theta + h e_j) - pose(theta)] / h``
    central: ``[pose(theta + h e_j) - pose(theta - h e_j)] / 2h``

    Pose differences are wrapped to ``(-pi, pi]`` before dividing.  With
    ``phi0`` the base solve is warm-started from it and every perturbed solve
    from the base solution; ``base`` may carry an already solved
    ``(pose, phi)`` pair for ``theta``.
    """
    if scheme not in SCHEMES:
        raise InvalidInput(f"unknown scheme {scheme!r}")
    if not step > 0.0:
        raise InvalidInput("step must be > 0")
    theta = np.asarray(theta, dtype=float)
    if base is None:
        try:
            base_pose, base_phi = _pose(params, theta, cfg, phi0)
        except WristError as exc:
            raise FkFailure(f"forward kinematics failed at {theta.tolist()}: {exc}") from exc
    else:
        base_pose, base_phi = base
    warm = base_phi if (phi0 is not None or base is not None) else None

    J = np.empty((3, 3))
    for j in range(3):
        e = np.zeros(3)
        e[j] = step
        plus = _perturbed_pose(params, theta + e, cfg, warm)
        if scheme == "forward":
            J[:, j] = wrap_angle(plus - base_pose) / step
        else:
            minus = _perturbed_pose(params, theta - e, cfg, warm)
            J[:, j] = wrap_angle(plus - minus) / (2.0 * step)
    return J


def richardson(estimates, steps) -> np.ndarray:
    """Extrapolate central-difference estimates to zero step (error in even powers)."""
    h = [float(s) for s in steps]
    table = [np.asarray(e, dtype=float) for e in estimates]
    for m in range(1, len(table)):
        nxt = []
        for k in range(m, len(h)):
            ratio = (h[k - m] / h[k]) ** 2
            nxt.append(table[k - m + 1] + (table[k - m + 1] - table[k - m]) / (ratio - 1.0))
        table = nxt
    return table[-1]


def jacobian_oracle(params: StructuralParams, theta, steps=ORACLE_STEPS, cfg: SolverConfig = ORACLE_SOLVER) -> np.ndarray:
    """High-accuracy reference: Richardson over central differences at FK tolerance 1e-14."""
    estimates = [jacobian_fd(params, theta, h, "central", cfg) for h in steps]
    return richardson(estimates, steps)


def condition_number(J) -> float:
    sv = np.linalg.svd(np.asarray(J, dtype=float), compute_uv=False)
    if sv[-1] < 1e-12:
        raise SingularMatrix(f"smallest singular value {sv[-1]:.3e} < 1e-12")
    return float(sv[0] / sv[-1])


def default_sweep_path(points: int = 1001) -> list[np.ndarray]:
    """theta1 = 0, theta2 = 4pi/3, theta3 from 2pi/3 to pi in pi/3000 increments."""
    t1, t2, t3 = HOME_THETA
    return [np.array([t1, t2, v]) for v in np.linspace(t3, math.pi, points)]


def is_u_shaped(values) -> bool:
    """Strictly decreasing up to an interior minimum, strictly increasing after it."""
    v = np.asarray(values, dtype=float)
    k = int(np.argmin(v))
    if k == 0 or k == len(v) - 1:
        return False
    return bool(np.all(np.diff(v[: k + 1]) < 0) and np.all(np.diff(v[k:]) > 0))


@dataclass(frozen=True)
class SweepReport:
    steps: list[float]
    max_error: list[float]
    rmse: list[float]
    argmin_step: float
    reference: str
    solver: dict = field(default_factory=dict)

    def rows(self):
        return list(zip(self.steps, self.max_error, self.rmse))

    def to_dict(self) -> dict:
        return {
            "steps": list(self.steps),
            "max_error": list(self.max_error),
            "rmse": list(self.rmse),
            "argmin_step": self.argmin_step,
            "reference": self.reference,
            "solver": dict(self.solver),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["step", "max_error", "rmse"])
        for s, m, r in self.rows():
            writer.writerow([f"{s:.9g}", f"{m:.9g}", f"{r:.9g}"])
        return buf.getvalue()


def reference_jacobians(params: StructuralParams, path) -> list[np.ndarray]:
    try:
        return [jacobian_oracle(params, theta) for theta in path]
    except WristError as exc:
        raise FkFailure(str(exc)) from exc


def step_size_sweep(
    params: StructuralParams,
    path=None,
    steps=DEFAULT_STEPS,
    cfg: SolverConfig = DEFAULT_SOLVER,
    reference=None,
) -> SweepReport:
    """Forward-difference error against the oracle, per step, over a path.

    The base FK solve at each path point is warm-started from the previous
    point and perturbed solves from the base (continuation), so the solver
    tolerance shows up as a noise floor at small steps.  ``reference`` may
    hold precomputed oracle Jacobians for the path.
    """
    path = default_sweep_path() if path is None else [np.asarray(p, dtype=float) for p in path]
    steps = sorted((float(s) for s in steps), reverse=True)
    if not steps or any(not (0.0 < s <= 0.1) for s in steps):
        raise InvalidInput("steps must lie in (0, 0.1]")
    if len(set(steps)) != len(steps):
        raise InvalidInput("steps must be distinct")
    if reference is None:
        reference = reference_jacobians(params, path)
    if len(reference) != len(path):
        raise InvalidInput("reference must have one Jacobian per path point")

    bases = []
    phi = None
    for theta in path:
        try:
            pose, phi = _pose(params, theta, cfg, phi)
        except WristError as exc:
            raise FkFailure(f"forward kinematics failed at {theta.tolist()}: {exc}") from exc
        bases.append((pose, phi))

    max_error, rmse = [], []
    for h in steps:
        errs = np.array(
            [jacobian_fd(params, theta, h, "forward", cfg, base=b) - ref for theta, b, ref in zip(path, bases, reference)]
        )
        max_error.append(float(np.abs(errs).max()))
        rmse.append(float(np.sqrt(np.mean(errs**2))))
    argmin = steps[int(np.argmin(rmse))]
    return SweepReport(
        steps=steps,
        max_error=max_error,
        rmse=rmse,
        argmin_step=argmin,
        reference=(
            "Richardson-extrapolated central differences, steps "
            f"{', '.join(f'{s:g}' for s in ORACLE_STEPS)}, FK tolerance {ORACLE_SOLVER.tolerance:g}"
        ),
        solver={"method": cfg.method, "tolerance": cfg.tolerance, "max_iterations": cfg.max_iterations},
    )
