"""Kinematics engine for a three-motor parallel wrist."""

from .geometry import (
    StructuralParams,
    default_params,
    home_motor_angles,
    load_params,
    lower_attachment_point,
    solve_link_parameters,
)
from .jacobian import SweepReport, condition_number, jacobian_fd, jacobian_oracle, step_size_sweep
from .kinematics import (
    FkSolution,
    SolverConfig,
    constraint_residual,
    platform_normal,
    rotation_from_points,
    solve_fk,
    solve_ik,
    upper_points_from_phi,
)
from .rotation import PlatformPose, rotation_from_rpy, rpy_from_rotation
from .workspace import (
    TrackingErrorReport,
    TrajectorySpec,
    WorkspaceLimit,
    circular_trajectory,
    is_reachable,
    sample_workspace,
    simulate_tracking,
)

__version__ = "0.1.0"
