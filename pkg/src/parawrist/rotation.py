"""Fixed-axis roll/pitch/yaw attitude: ``R = Rz(alpha) @ Ry(beta) @ Rx(gamma)``."""

from __future__ import annotations

import math
import warnings
from typing import NamedTuple

import numpy as np

from .errors import GimbalProximityWarning

GIMBAL_TOL = 1e-6


class PlatformPose(NamedTuple):
    alpha: float  # yaw, about Z
    beta: float  # pitch, about Y
    gamma: float  # roll, about X

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.gamma])


def rot_x(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rotation_from_rpy(pose) -> np.ndarray:
    alpha, beta, gamma = pose
    return rot_z(alpha) @ rot_y(beta) @ rot_x(gamma)


def rpy_from_rotation(R: np.ndarray) -> PlatformPose:
    """Extract yaw/pitch/roll with ``beta`` in ``[-pi/2, pi/2]``.

    Within ``GIMBAL_TOL`` of ``|beta| = pi/2`` yaw and roll are not separately
    identifiable; roll is reported as 0, the combined rotation is folded into
    yaw and a :class:`GimbalProximityWarning` is emitted.
    """
    R = np.asarray(R, dtype=float)
    beta = math.atan2(-R[2, 0], math.hypot(R[2, 1], R[2, 2]))
    if math.pi / 2 - abs(beta) < GIMBAL_TOL:
        warnings.warn(
            f"pitch {beta:.9f} rad is at gimbal lock; roll folded into yaw",
            GimbalProximityWarning,
            stacklevel=2,
        )
        # R = Rz(a) Ry(+-pi/2): first row of column 2 / column 1 give the sum/difference
        alpha = math.atan2(-R[0, 1], R[1, 1])
        return PlatformPose(alpha, beta, 0.0)
    alpha = math.atan2(R[1, 0], R[0, 0])
    gamma = math.atan2(R[2, 1], R[2, 2])
    return PlatformPose(alpha, beta, gamma)


def is_rotation(R: np.ndarray, tol: float = 1e-9) -> bool:
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3):
        return False
    return bool(np.abs(R.T @ R - np.eye(3)).max() <= tol and abs(np.linalg.det(R) - 1.0) <= tol)


def wrap_angle(x):
    """Map angles to ``(-pi, pi]``."""
    y = np.mod(np.asarray(x, dtype=float) + math.pi, 2.0 * math.pi) - math.pi
    y = np.where(y == -math.pi, math.pi, y)
    return float(y) if np.ndim(y) == 0 else y
