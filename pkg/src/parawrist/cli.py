"""Command-line front end.

Exit codes: 0 ok, 2 invalid input, 3 solver failure, 4 unreachable pose.
Angles are radians unless ``--unit deg`` is given; conversion happens only
when parsing arguments and printing results.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .errors import InvalidInput, SolverError, UnreachablePose, WorkspaceLimitViolation, WristError
from .geometry import (
    DEFAULT_H,
    DEFAULT_R1,
    DEFAULT_R2,
    DEFAULT_RL,
    home_motor_angles,
    load_params,
    solve_link_parameters,
)
from .jacobian import (
    DEFAULT_STEPS,
    condition_number,
    default_sweep_path,
    jacobian_fd,
    jacobian_oracle,
    step_size_sweep,
)
from .kinematics import SolverConfig, solve_fk, solve_ik
from .workspace import (
    TrajectorySpec,
    WorkspaceLimit,
    check_reachable,
    circular_trajectory,
    delay_error_closed_form,
    sample_workspace,
    simulate_tracking,
    trajectory_csv,
    workspace_csv,
    workspace_summary,
)

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_REACH = 0, 2, 3, 4

# measured zero-crossing errors on the hardware prototype, A = 0.68 rad, ~0.06 s delay
HARDWARE_ZERO_CROSSING = {4.0: 0.064, 2.0: 0.127, 1.0: 0.247}


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _to_rad(values, unit):
    return [math.radians(v) for v in values] if unit == "deg" else [float(v) for v in values]


def _from_rad(values, unit):
    return [math.degrees(v) for v in values] if unit == "deg" else [float(v) for v in values]


def parse_steps(text: str) -> list[float]:
    """``1e-1..1e-7`` (every decade in between) or a comma-separated list."""
    if ".." in text:
        a, b = (float(x) for x in text.split("..", 1))
        if a <= 0.0 or b <= 0.0:
            raise argparse.ArgumentTypeError("steps must be positive")
        lo, hi = sorted((round(math.log10(a)), round(math.log10(b))))
        return [10.0**k for k in range(hi, lo - 1, -1)]
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse steps {text!r}") from None


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _solver(args) -> SolverConfig:
    return SolverConfig(tolerance=args.tolerance, max_iterations=args.max_iterations, method=args.method)


def _add_solver_flags(p):
    p.add_argument("--tolerance", type=float, default=1e-12, help="FK residual tolerance (default 1e-12)")
    p.add_argument("--max-iterations", type=int, default=50)
    p.add_argument(
        "--method",
        choices=("closure", "pairwise"),
        default="closure",
        help="Newton residual: arm closure (default) or pairwise cosines",
    )


def cmd_params(args):
    params = solve_link_parameters(args.r1, args.r2, args.h, args.rl)
    out = params.to_dict()
    if args.unit == "deg":
        out["theta0"] = math.degrees(out["theta0"])
    out["unit"] = args.unit
    _emit(_dump(out), args.output)


def cmd_fk(args):
    params = load_params(args.params)
    theta = _to_rad(args.theta, args.unit)
    sol = solve_fk(params, theta, _solver(args))
    out = sol.to_dict()
    out["pose"] = dict(zip(("alpha", "beta", "gamma"), _from_rad(sol.pose, args.unit)))
    out["phi"] = _from_rad(sol.phi, args.unit)
    out["unit"] = args.unit
    _emit(_dump(out), args.output)


def cmd_ik(args):
    params = load_params(args.params)
    pose = _to_rad(args.rpy, args.unit)
    if not args.ignore_limit:
        check_reachable(pose, WorkspaceLimit(args.limit), params)
    sol = solve_ik(params, pose)
    out = {
        "theta": _from_rad(sol.theta, args.unit),
        "phi": _from_rad(sol.phi, args.unit),
        "upper_points": sol.upper_points.tolist(),
        "unit": args.unit,
    }
    _emit(_dump(out), args.output)


def _jacobian_matrix(args):
    params = load_params(args.params)
    theta = _to_rad(args.theta, args.unit) if args.theta else list(home_motor_angles())
    if args.oracle:
        J = jacobian_oracle(params, theta)
    else:
        J = jacobian_fd(params, theta, args.step, args.scheme, _solver(args))
    out = {
        "theta": _from_rad(theta, args.unit),
        "scheme": "oracle" if args.oracle else args.scheme,
        "step": None if args.oracle else args.step,
        "jacobian": J.tolist(),
        "row_sums": J.sum(axis=1).tolist(),
        "condition_number": condition_number(J),
    }
    _emit(_dump(out), args.output)


def _jacobian_sweep(args):
    params = load_params(args.params)
    path = default_sweep_path(args.points)
    report = step_size_sweep(params, path, args.steps, _solver(args))
    text = report.to_csv() if args.format == "csv" else report.to_json() + "\n"
    _emit(text, args.output)
    if args.figure:
        from .plotting import plot_sweep

        plot_sweep(report, args.figure)


def cmd_jacobian(args):
    if getattr(args, "sweep_cmd", None) == "sweep" or args.sweep:
        if not hasattr(args, "steps"):
            args.steps, args.points, args.figure = list(DEFAULT_STEPS), 1001, None
        _jacobian_sweep(args)
    else:
        _jacobian_matrix(args)


def cmd_trajectory(args):
    params = load_params(args.params)
    spec = TrajectorySpec(
        amplitude=args.amplitude,
        period=args.period,
        sample_rate=args.rate,
        cycles=args.cycles,
        limit=WorkspaceLimit(args.limit),
    )
    samples = circular_trajectory(spec, params, _solver(args))
    report_text = None
    if args.delay is not None:
        samples, report = simulate_tracking(samples, args.delay)
        out = report.to_dict()
        out["closed_form"] = delay_error_closed_form(spec.amplitude, spec.period, args.delay)
        out.update(amplitude=spec.amplitude, period=spec.period, sample_rate=spec.sample_rate)
        ref = HARDWARE_ZERO_CROSSING.get(spec.period)
        if ref is not None and math.isclose(spec.amplitude, 0.68) and math.isclose(args.delay, 0.06):
            out["hardware_reference"] = {
                "zero_crossing_error": ref,
                "relative_gap": (report.zero_crossing_error - ref) / ref,
            }
        report_text = _dump(out)
    _emit(trajectory_csv(samples), args.output)
    if report_text is not None:
        if args.report:
            _emit(report_text, args.report)
        else:
            # keep stdout a clean CSV stream when the trajectory goes there
            (sys.stdout if args.output else sys.stderr).write(report_text)
    if args.figure:
        from .plotting import plot_tracking

        plot_tracking(samples, args.figure, title=f"T = {spec.period:g} s")


def cmd_workspace(args):
    params = load_params(args.params)
    limit = WorkspaceLimit(args.limit)
    nodes = sample_workspace(params, args.resolution, limit)
    _emit(workspace_csv(nodes), args.output)
    summary = _dump(workspace_summary(nodes))
    (sys.stdout if args.output else sys.stderr).write(summary)
    if args.figure:
        from .plotting import plot_workspace

        plot_workspace(nodes, args.figure, limit.radius)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", metavar="JSON", help='parameter file {"r1", "r2", "h", "rl"} in mm')
    common.add_argument("--unit", choices=("rad", "deg"), default="rad", help="angle unit for input and output")
    common.add_argument("--output", "-o", metavar="PATH", help="write the main result here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="parawrist",
        description="Kinematics toolkit for a three-motor parallel wrist.",
        epilog="Exit codes: 0 ok, 2 invalid input, 3 solver failure, 4 unreachable pose.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "params",
        parents=[common],
        help="derive arc-linkage dimensions",
        description="Derive theta0, l1, l2 from r1, r2, h, rl. Output JSON: r1, r2, h, rl, l1, l2 (mm), theta0.",
    )
    p.add_argument("--r1", type=float, default=DEFAULT_R1)
    p.add_argument("--r2", type=float, default=DEFAULT_R2)
    p.add_argument("--h", type=float, default=DEFAULT_H)
    p.add_argument("--rl", type=float, default=DEFAULT_RL)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser(
        "fk",
        parents=[common],
        help="forward kinematics",
        description="Motor angles to platform RPY. Output JSON: pose{alpha,beta,gamma}, phi[3], "
        "upper_points[3][3] (mm), residual_norm, iterations.",
    )
    p.add_argument("--theta", type=float, nargs=3, required=True, metavar=("T1", "T2", "T3"))
    _add_solver_flags(p)
    p.set_defaults(func=cmd_fk)

    p = sub.add_parser(
        "ik",
        parents=[common],
        help="inverse kinematics",
        description="Platform RPY to motor angles. Output JSON: theta[3], phi[3], upper_points[3][3] (mm). "
        "Exit 4 when the pose violates the tilt limit or has no real arc angle.",
    )
    p.add_argument("--rpy", type=float, nargs=3, required=True, metavar=("ALPHA", "BETA", "GAMMA"))
    p.add_argument("--limit", type=float, default=0.7, help="tilt limit radius in rad (default 0.7)")
    p.add_argument("--ignore-limit", action="store_true", help="skip the tilt-limit check")
    p.set_defaults(func=cmd_ik)

    p = sub.add_parser(
        "jacobian",
        parents=[common],
        help="numerical Jacobian or step-size sweep",
        description="Matrix mode output JSON: theta, scheme, step, jacobian[3][3] (rows alpha,beta,gamma; "
        "columns theta1..3), row_sums, condition_number. 'jacobian sweep' (or --sweep) prints the step "
        "sweep as CSV (step,max_error,rmse) or JSON.",
    )
    p.add_argument("--theta", type=float, nargs=3, metavar=("T1", "T2", "T3"), help="default: home angles")
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--scheme", choices=("forward", "central"), default="forward")
    p.add_argument("--oracle", action="store_true", help="Richardson-extrapolated reference instead")
    p.add_argument("--sweep", action="store_true", help="run the default step-size sweep")
    p.add_argument("--format", choices=("json", "csv"), default="csv", help="sweep output format")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_jacobian)
    jsub = p.add_subparsers(dest="sweep_cmd")
    s = jsub.add_parser(
        "sweep",
        parents=[common],
        help="step-size sweep along theta3 in [2pi/3, pi]",
        description="Forward-difference Jacobian error against the oracle along theta1=0, theta2=4pi/3, "
        "theta3 from 2pi/3 to pi. CSV columns: step,max_error,rmse.",
    )
    s.add_argument("--steps", type=parse_steps, default=list(DEFAULT_STEPS), help="e.g. 1e-1..1e-7 or 1e-2,1e-3")
    s.add_argument("--points", type=int, default=1001, help="path points (1001 = pi/3000 spacing)")
    s.add_argument("--format", choices=("json", "csv"), default="csv")
    s.add_argument("--figure", metavar="PATH", help="also render the error curves to an image file")
    _add_solver_flags(s)

    p = sub.add_parser(
        "trajectory",
        parents=[common],
        help="circular tilt trajectory and delay tracking report",
        description="CSV columns: t,alpha_cmd,beta_cmd,gamma_cmd,theta1,theta2,theta3 and, with --delay, "
        "alpha_state,beta_state,gamma_state. The tracking report (JSON) goes to --report, or to stdout "
        "when --output is used, else stderr.",
    )
    p.add_argument("--amplitude", type=float, default=0.68)
    p.add_argument("--period", type=float, default=4.0)
    p.add_argument("--rate", type=float, default=100.0, help="sample rate in Hz")
    p.add_argument("--cycles", type=int, default=1)
    p.add_argument("--delay", type=float, help="transport delay in s")
    p.add_argument("--limit", type=float, default=0.7)
    p.add_argument("--report", metavar="PATH", help="write the tracking report JSON here")
    p.add_argument("--figure", metavar="PATH", help="render command/state curves to an image file")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser(
        "workspace",
        parents=[common],
        help="reachability grid over pitch and roll",
        description="CSV columns: beta,gamma,feasible,alpha_min,alpha_max over [-0.8, 0.8]^2. "
        "A JSON summary goes to stdout when --output is used, else stderr.",
    )
    p.add_argument("--resolution", type=float, default=0.05)
    p.add_argument("--limit", type=float, default=0.7)
    p.add_argument("--figure", metavar="PATH", help="render the map to an image file")
    p.set_defaults(func=cmd_workspace)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except WorkspaceLimitViolation as exc:
        print(f"error: workspace limit violated: {exc}", file=sys.stderr)
        return EXIT_REACH
    except UnreachablePose as exc:
        print(f"error: unreachable pose: {exc}", file=sys.stderr)
        return EXIT_REACH
    except SolverError as exc:
        print(f"error: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except WristError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
