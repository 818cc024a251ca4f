"""Structural constants of the three-motor parallel wrist and linkage synthesis.

Lengths are millimetres, angles radians.  Frame ``O0`` sits at the centre of
the driving-joint circle with ``Z0`` along the motor axis; frame ``O1`` is
parallel to it, offset by ``h`` along ``Z0``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import InfeasibleArcRadius, InvalidInput, NonPositiveInput

# prototype dimensions (mm)
DEFAULT_R1 = 27.35
DEFAULT_R2 = 30.0
DEFAULT_H = 27.35
DEFAULT_RL = 25.0

HOME_THETA = (0.0, 4.0 * math.pi / 3.0, 2.0 * math.pi / 3.0)

_IDENTITY_TOL = 1e-9


@dataclass(frozen=True)
class StructuralParams:
    r1: float
    r2: float
    h: float
    rl: float
    l1: float
    l2: float
    theta0: float

    def __post_init__(self):
        for name in ("r1", "r2", "h", "rl", "l1", "l2"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0.0:
                raise NonPositiveInput(f"non-positive input: {name}={value!r}")
        if abs(self.theta0 - math.atan(self.r1 / self.h)) > 1e-12:
            raise InvalidInput("theta0 inconsistent with atan(r1 / h)")
        if abs((self.rl + self.l2) * math.cos(self.theta0) - self.h) > _IDENTITY_TOL:
            raise InvalidInput("rl + l2 must equal h / cos(theta0)")
        if abs(self.rl + self.l1 - self.r2) > _IDENTITY_TOL:
            raise InvalidInput("rl + l1 must equal r2")

    @property
    def home_center(self) -> np.ndarray:
        """Position of ``O1`` expressed in frame ``O0``."""
        return np.array([0.0, 0.0, self.h])

    def to_dict(self) -> dict:
        return asdict(self)


def solve_link_parameters(r1: float, r2: float, h: float, rl: float) -> StructuralParams:
    """Derive the arc-linkage dimensions from the primary design radii.

    ``theta0 = atan(r1/h)``, ``l2 = h/cos(theta0) - rl`` and ``l1 = r2 - rl``.
    Raises :class:`NonPositiveInput` for non-positive inputs and
    :class:`InfeasibleArcRadius` when either straight segment would not be
    positive.
    """
    for name, value in (("r1", r1), ("r2", r2), ("h", h), ("rl", rl)):
        value = float(value)
        if not math.isfinite(value) or value <= 0.0:
            raise NonPositiveInput(f"non-positive input: {name}={value!r}")
    r1, r2, h, rl = float(r1), float(r2), float(h), float(rl)

    theta0 = math.atan(r1 / h)
    # h / cos(atan(r1/h)) == hypot(r1, h); the hypot form is exact to the ulp
    slant = math.hypot(r1, h)
    l1 = r2 - rl
    l2 = slant - rl
    if l1 <= 0.0:
        raise InfeasibleArcRadius(f"arc radius rl={rl} leaves l1={l1:.6g} <= 0 (needs rl < r2)")
    if l2 <= 0.0:
        raise InfeasibleArcRadius(
            f"arc radius rl={rl} leaves l2={l2:.6g} <= 0 (needs rl < h/cos(theta0)={slant:.6g})"
        )
    return StructuralParams(r1=r1, r2=r2, h=h, rl=rl, l1=l1, l2=l2, theta0=theta0)


def default_params() -> StructuralParams:
    return solve_link_parameters(DEFAULT_R1, DEFAULT_R2, DEFAULT_H, DEFAULT_RL)


def load_params(path: str | Path | None) -> StructuralParams:
    """Read ``{"r1", "r2", "h", "rl"}`` from a JSON file; ``None`` gives the defaults.

    Derived fields (``l1``, ``l2``, ``theta0``) in the file are ignored.
    """
    if path is None:
        return default_params()
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    try:
        values = [data[key] for key in ("r1", "r2", "h", "rl")]
    except KeyError as exc:
        raise InvalidInput(f"parameter file is missing key {exc.args[0]!r}") from None
    try:
        values = [float(v) for v in values]
    except (TypeError, ValueError):
        raise InvalidInput("parameter values must be numeric") from None
    return solve_link_parameters(*values)


def home_motor_angles() -> np.ndarray:
    return np.array(HOME_THETA)


def lower_attachment_point(params: StructuralParams, theta_i: float) -> np.ndarray:
    """Driving/arc joint point ``P_i = (r1 cos t, r1 sin t, 0)`` in frame ``O0``."""
    return np.array([params.r1 * math.cos(theta_i), params.r1 * math.sin(theta_i), 0.0])


def home_upper_points(params: StructuralParams) -> np.ndarray:
    """Platform joint points ``P4..P6`` at home, relative to ``O1`` (rows)."""
    t = np.array(HOME_THETA)
    return params.r2 * np.column_stack([-np.sin(t), np.cos(t), np.zeros(3)])
