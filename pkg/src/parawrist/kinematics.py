"""Forward and inverse kinematics of the parallel wrist.

Each limb's arc linkage swings by ``phi_i`` about the axis ``O1 P_i``; the
platform joint point ``P_{i+3}`` then lies on the ``r2`` sphere about ``O1``.
Forward kinematics finds ``phi`` such that the three platform points are
pairwise ``2*pi/3`` apart, then rebuilds the platform rotation from them.
Inverse kinematics is closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .errors import (
    BranchEscape,
    BranchViolation,
    DegeneratePlane,
    InvalidInput,
    NoConvergence,
    NonOrthonormalResult,
    SingularJacobian,
    UnreachablePose,
)
from .geometry import HOME_THETA, StructuralParams, home_upper_points
from .rotation import PlatformPose, rotation_from_rpy, rpy_from_rotation

COS_120 = -0.5
HALF_PI = 0.5 * math.pi
SQRT3_2 = 0.5 * math.sqrt(3.0)

# index pairs (P4,P5), (P4,P6), (P5,P6)
PAIRS = ((0, 1), (0, 2), (1, 2))

BRANCH_MARGIN = 1e-3
METHODS = ("closure", "pairwise")


@dataclass(frozen=True)
class SolverConfig:
    """Newton-Raphson settings for :func:`solve_fk`.

    ``method="closure"`` iterates on ``sum(O1P_i) = 0``, which is equivalent
    to the pairwise-angle conditions on the ``r2`` sphere but has a regular
    Jacobian at the root.  ``method="pairwise"`` iterates on the pairwise
    cosine residual directly; its Jacobian is rank deficient at every root,
    so it converges linearly and the pose is only accurate to about
    ``sqrt(tolerance)``.
    """

    tolerance: float = 1e-12
    max_iterations: int = 50
    initial_guess: tuple[float, float, float] | None = None
    method: str = "closure"
    max_step: float = 0.5

    def __post_init__(self):
        if not self.tolerance > 0.0:
            raise InvalidInput("tolerance must be > 0")
        if self.max_iterations < 1:
            raise InvalidInput("max_iterations must be >= 1")
        if self.method not in METHODS:
            raise InvalidInput(f"unknown solver method {self.method!r}")
        if not self.max_step > 0.0:
            raise InvalidInput("max_step must be > 0")

    def with_guess(self, phi) -> "SolverConfig":
        return replace(self, initial_guess=tuple(float(p) for p in phi))


DEFAULT_SOLVER = SolverConfig()


@dataclass(frozen=True)
class FkSolution:
    pose: PlatformPose
    phi: np.ndarray
    upper_points: np.ndarray  # rows P4, P5, P6 in frame O0
    residual_norm: float
    iterations: int
    rotation: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "pose": dict(self.pose._asdict()),
            "phi": self.phi.tolist(),
            "upper_points": self.upper_points.tolist(),
            "residual_norm": self.residual_norm,
            "iterations": self.iterations,
        }


class IkSolution(NamedTuple):
    theta: np.ndarray
    phi: np.ndarray
    upper_points: np.ndarray


def _arm_vectors(params: StructuralParams, theta, phi) -> np.ndarray:
    """Rows ``O1 P_{i+3}`` for i = 1..3."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c0, s0 = math.cos(params.theta0), math.sin(params.theta0)
    cp, sp = np.cos(phi), np.sin(phi)
    ct, st = np.cos(theta), np.sin(theta)
    return params.r2 * np.column_stack([-cp * st + sp * c0 * ct, cp * ct + sp * c0 * st, sp * s0])


def _arm_tangents(params: StructuralParams, theta, phi) -> np.ndarray:
    """Rows ``d(O1 P_{i+3}) / d phi_i``."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c0, s0 = math.cos(params.theta0), math.sin(params.theta0)
    cp, sp = np.cos(phi), np.sin(phi)
    ct, st = np.cos(theta), np.sin(theta)
    return params.r2 * np.column_stack([sp * st + cp * c0 * ct, -sp * ct + cp * c0 * st, cp * s0])


def upper_points_from_phi(params: StructuralParams, theta, phi) -> np.ndarray:
    """Platform joint points ``P4, P5, P6`` (rows) in frame ``O0``."""
    return _arm_vectors(params, theta, phi) + params.home_center


def constraint_residual(params: StructuralParams, theta, phi) -> np.ndarray:
    """Pairwise cosines of ``O1P4, O1P5, O1P6`` minus ``cos(2*pi/3)``.

    The arm vectors have length ``r2`` identically, so dot products are
    normalised by ``r2**2`` instead of the vector norms.
    """
    u = _arm_vectors(params, theta, phi)
    scale = params.r2 * params.r2
    return np.array([u[i] @ u[j] / scale - COS_120 for i, j in PAIRS])


def constraint_jacobian(params: StructuralParams, theta, phi) -> np.ndarray:
    """Analytic ``d constraint_residual / d phi``."""
    u = _arm_vectors(params, theta, phi)
    du = _arm_tangents(params, theta, phi)
    scale = params.r2 * params.r2
    J = np.zeros((3, 3))
    for k, (i, j) in enumerate(PAIRS):
        J[k, i] = du[i] @ u[j] / scale
        J[k, j] = u[i] @ du[j] / scale
    return J


def closure_residual(params: StructuralParams, theta, phi) -> np.ndarray:
    """``(O1P4 + O1P5 + O1P6) / r2``; zero exactly when the arms are 120 deg apart."""
    return _arm_vectors(params, theta, phi).sum(axis=0) / params.r2


def closure_jacobian(params: StructuralParams, theta, phi) -> np.ndarray:
    return _arm_tangents(params, theta, phi).T / params.r2


class _Limbs:
    """Trig terms of one motor configuration, reused across Newton iterates.

    Works with unit arm vectors ``O1P_{i+3} / r2``.
    """

    def __init__(self, params: StructuralParams, theta: np.ndarray):
        self.c0 = math.cos(params.theta0)
        self.s0 = math.sin(params.theta0)
        self.ct = np.cos(theta)
        self.st = np.sin(theta)

    def arms(self, phi):
        cp, sp = np.cos(phi), np.sin(phi)
        return np.column_stack(
            [-cp * self.st + sp * self.c0 * self.ct, cp * self.ct + sp * self.c0 * self.st, sp * self.s0]
        )

    def tangents(self, phi):
        cp, sp = np.cos(phi), np.sin(phi)
        return np.column_stack(
            [sp * self.st + cp * self.c0 * self.ct, -sp * self.ct + cp * self.c0 * self.st, cp * self.s0]
        )

    def evaluate(self, phi, method):
        """Return (merit, pairwise residual norm, closure norm, unit arms)."""
        u = self.arms(phi)
        g = u @ u.T
        pairwise = np.array([g[0, 1], g[0, 2], g[1, 2]]) - COS_120
        eq_res = float(np.sqrt(pairwise @ pairwise))
        closure = float(np.linalg.norm(u.sum(axis=0)))
        merit = closure if method == "closure" else eq_res
        return merit, eq_res, closure, u

    def newton_step(self, phi, u, method):
        du = self.tangents(phi)
        if method == "closure":
            J = du.T
            # Hadamard ratio: |det| relative to the product of column norms
            if abs(np.linalg.det(J)) < 1e-14 * np.prod(np.linalg.norm(J, axis=0)):
                raise SingularJacobian(f"closure Jacobian is singular at phi={phi.tolist()}")
            return np.linalg.solve(J, u.sum(axis=0))
        J = np.zeros((3, 3))
        r = np.empty(3)
        for k, (i, j) in enumerate(PAIRS):
            J[k, i] = du[i] @ u[j]
            J[k, j] = u[i] @ du[j]
            r[k] = u[i] @ u[j] - COS_120
        return np.linalg.lstsq(J, r, rcond=None)[0]


def _accepted(cfg, eq_res, closure) -> bool:
    if cfg.method == "closure":
        return eq_res <= cfg.tolerance and closure <= cfg.tolerance
    return eq_res <= cfg.tolerance


def solve_fk(
    params: StructuralParams,
    theta,
    cfg: SolverConfig = DEFAULT_SOLVER,
    phi0=None,
) -> FkSolution:
    """Motor angles to platform attitude by damped Newton-Raphson.

    ``phi0`` (or ``cfg.initial_guess``) warm-starts the iteration; the default
    start is ``phi = 0``.  Steps are capped at ``cfg.max_step`` per component
    and backtracked until the residual decreases.  An iterate leaving
    ``(-pi/2, pi/2)^3`` is clamped back once; a second escape raises
    :class:`BranchEscape`.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (3,) or not np.all(np.isfinite(theta)):
        raise InvalidInput("theta must be three finite angles")
    if phi0 is None:
        phi0 = cfg.initial_guess if cfg.initial_guess is not None else (0.0, 0.0, 0.0)
    phi = np.array(phi0, dtype=float)
    if phi.shape != (3,) or np.any(np.abs(phi) >= HALF_PI):
        raise BranchEscape(f"initial guess {phi.tolist()} is outside the operating branch")

    limbs = _Limbs(params, theta)
    method = cfg.method
    merit, eq_res, closure, u = limbs.evaluate(phi, method)
    escapes = 0
    iterations = 0
    while not _accepted(cfg, eq_res, closure):
        if iterations >= cfg.max_iterations:
            raise NoConvergence(
                f"no convergence after {iterations} iterations, residual {eq_res:.3e}",
                residual=eq_res,
                iterations=iterations,
            )
        step = limbs.newton_step(phi, u, method)
        biggest = float(np.abs(step).max())
        if biggest > cfg.max_step:
            step = step * (cfg.max_step / biggest)
        t = 1.0
        while True:
            cand = phi - t * step
            state = limbs.evaluate(cand, method)
            if state[0] < (1.0 - 1e-4 * t) * merit or t < 1e-4:
                break
            t *= 0.5
        if np.any(np.abs(cand) >= HALF_PI):
            escapes += 1
            if escapes > 1:
                raise BranchEscape(f"iterate left the operating branch twice (phi={cand.tolist()})")
            cand = np.clip(cand, -HALF_PI + BRANCH_MARGIN, HALF_PI - BRANCH_MARGIN)
            state = limbs.evaluate(cand, method)
        phi = cand
        merit, eq_res, closure, u = state
        iterations += 1

    points = upper_points_from_phi(params, theta, phi)
    # the rigid-body defect scales with the closure residual, and with the
    # square root of the pairwise residual
    defect = cfg.tolerance if cfg.method == "closure" else math.sqrt(cfg.tolerance)
    ortho_tol = max(1e-9, 10.0 * defect)
    R = rotation_from_points(points, params, tol=ortho_tol)
    return FkSolution(
        pose=rpy_from_rotation(R),
        phi=phi,
        upper_points=points,
        residual_norm=eq_res,
        iterations=iterations,
        rotation=R,
    )


def platform_normal(upper_points) -> np.ndarray:
    """Normal of the plane through ``P4, P5, P6``, oriented along platform +Z.

    Computed as ``(P6 - P4) x (P5 - P4)``: the home points run clockwise
    seen from +Z, so this ordering gives the upward normal.
    """
    p = np.asarray(upper_points, dtype=float)
    n = np.cross(p[2] - p[0], p[1] - p[0])
    span = max(np.linalg.norm(p[1] - p[0]), np.linalg.norm(p[2] - p[0])) ** 2
    if span == 0.0 or np.linalg.norm(n) < 1e-9 * span:
        raise DegeneratePlane("platform points are collinear")
    return n


def rotation_from_points(upper_points, params: StructuralParams, tol: float = 1e-9) -> np.ndarray:
    """Platform rotation from the three joint points.

    Column 2 comes from ``P4`` (home direction +Y), column 1 from ``P5``
    combined with column 2, column 3 from the platform normal.
    """
    u = np.asarray(upper_points, dtype=float) - params.home_center
    col2 = u[0] / params.r2
    # home P5 direction is (sqrt3/2, -1/2, 0) = sqrt3/2 * e1 - 1/2 * e2
    col1 = (u[1] / params.r2 + 0.5 * col2) / SQRT3_2
    n = platform_normal(upper_points)
    col3 = n / np.linalg.norm(n)
    R = np.column_stack([col1, col2, col3])
    defect = float(np.abs(R.T @ R - np.eye(3)).max())
    if defect > tol:
        raise NonOrthonormalResult(f"points are not a rigid image of home (defect {defect:.2e})")
    return R


def solve_ik(params: StructuralParams, pose) -> IkSolution:
    """Platform attitude to motor angles, closed form.

    Motor angles are reported in the turn centred on each motor's home
    angle, so the home pose maps back to exactly ``(0, 4pi/3, 2pi/3)``.
    """
    R = rotation_from_rpy(tuple(pose))
    u = home_upper_points(params) @ R.T
    c0, s0 = math.cos(params.theta0), math.sin(params.theta0)
    ratio = u[:, 2] / (params.r2 * s0)
    if np.any(np.abs(ratio) > 1.0 + 1e-12):
        worst = int(np.argmax(np.abs(ratio)))
        raise UnreachablePose(
            f"no real arc angle for limb {worst + 1}: |z/(r2 sin theta0)| = {abs(ratio[worst]):.6f} > 1"
        )
    phi = np.arcsin(np.clip(ratio, -1.0, 1.0))
    if np.any(np.abs(phi) >= HALF_PI):
        raise BranchViolation(f"arc angles {phi.tolist()} reach the edge of the operating branch")
    a = params.r2 * np.sin(phi) * c0
    b = params.r2 * np.cos(phi)
    den = a * a + b * b
    cos_t = (a * u[:, 0] + b * u[:, 1]) / den
    sin_t = (a * u[:, 1] - b * u[:, 0]) / den
    raw = np.arctan2(sin_t, cos_t)
    home = np.array(HOME_THETA)
    theta = home + np.mod(raw - home + math.pi, 2.0 * math.pi) - math.pi
    # exact home values instead of 2*pi round-off
    theta = np.where(np.abs(theta - home) < 1e-15, home, theta)
    return IkSolution(theta=theta, phi=phi, upper_points=u + params.home_center)
