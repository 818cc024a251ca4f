"""Exception types raised by the wrist kinematics engine."""


class WristError(Exception):
    """Base class for all errors raised by this package."""


# geometry / input validation
class InvalidInput(WristError, ValueError):
    pass


class NonPositiveInput(InvalidInput):
    pass


class InfeasibleArcRadius(InvalidInput):
    pass


# forward kinematics solver
class SolverError(WristError):
    pass


class NoConvergence(SolverError):
    def __init__(self, message, residual=float("nan"), iterations=0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class BranchEscape(SolverError):
    pass


class SingularJacobian(SolverError):
    pass


class FkFailure(SolverError):
    pass


class InfeasiblePerturbation(SolverError):
    pass


# attitude reconstruction
class DegeneratePlane(WristError):
    pass


class NonOrthonormalResult(WristError):
    pass


class SingularMatrix(WristError):
    pass


# inverse kinematics / reachability
class UnreachablePose(WristError):
    pass


class BranchViolation(UnreachablePose):
    pass


class WorkspaceLimitViolation(UnreachablePose):
    pass


class GimbalProximityWarning(RuntimeWarning):
    pass
