"""Command-line front-end: every analysis as a batch command with file I/O.

Exit codes: 0 success, 1 compute infeasibility (e.g. unreachable torque
target), 2 input/validation error. File numerics are SI; kgf and degrees
enter only through explicitly suffixed flags. Floats print as 9-significant-
digit scientific notation so outputs are reproducible across platforms.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import analysis, kinematics, model, muscle, thermal
from .actuation import bldc60_actuator, calibrate_sensor, read_calibration_csv
from .errors import InfeasibleTargetError, ModelError, PostureError, SensorRangeError
from .units import kgf_to_newton


def _fmt(x: float) -> str:
    return f"{x:.8e}"


def _load_model(args) -> model.RobotModel:
    if args.model is None:
        return model.load_default_model()
    return model.load_model_file(args.model)


def _parse_assignments(pairs, what: str) -> dict:
    out = {}
    for pair in pairs or []:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise ValueError(f"{what} must look like NAME=VALUE, got {pair!r}")
        out[name] = float(value)
    return out


def _build_posture(mdl: model.RobotModel, args) -> kinematics.Posture:
    """Zero posture overridden by --posture file, then inline angles."""
    posture = kinematics.Posture.zero(mdl)
    if getattr(args, "posture", None):
        with open(args.posture, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise ValueError("posture file must be a JSON object of joint: radians")
        posture = posture.replace(**{k: float(v) for k, v in loaded.items()})
    posture = posture.replace(**_parse_assignments(getattr(args, "angle", None), "--angle"))
    deg = _parse_assignments(getattr(args, "angle_deg", None), "--angle-deg")
    posture = posture.replace(**{k: math.radians(v) for k, v in deg.items()})
    posture.vector(mdl)  # reject unknown joint names early
    return posture


def _write_or_print(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def format_fk_report(mdl: model.RobotModel, posture) -> str:
    """The `fk` command payload; kept callable so tests can pin it byte-for-byte."""
    frames = kinematics.forward_kinematics(mdl, posture)
    lines = []
    for link in mdl.links:
        tf = frames[link.name]
        values = [*tf.rotation.reshape(-1), *tf.translation]
        lines.append("link," + link.name + "," + ",".join(_fmt(v) for v in values))
    if mdl.metadata.palm_marker is not None:
        p = kinematics.palm_point(mdl, posture)
        lines.append("palm," + ",".join(_fmt(v) for v in p))
    return "\n".join(lines) + "\n"


def cmd_fk(args) -> int:
    mdl = _load_model(args)
    posture = _build_posture(mdl, args)
    if args.check_limits:
        report = kinematics.check_limits(mdl, posture)
        if not report.passed:
            for c in report.failures:
                print(
                    f"limit violation: {c.joint} angle {_fmt(c.angle)} outside "
                    f"[{_fmt(c.angle_min)}, {_fmt(c.angle_max)}]",
                    file=sys.stderr,
                )
            return 2
    _write_or_print(format_fk_report(mdl, posture), args.out)
    return 0


def cmd_workspace(args) -> int:
    mdl = _load_model(args)
    if args.straight_axis:
        mdl = model.straight_axis_variant(mdl)
    joints = args.joints.split(",") if args.joints else None
    result = analysis.reachable_set(mdl, joints=joints, resolution=args.resolution)
    if args.out:
        _write_or_print(analysis.points_to_csv(result.points), args.out)
    print(f"points,{result.num_points}")
    print(f"hull_volume_m3,{_fmt(result.hull_volume)}")
    for axis, name in enumerate("xyz"):
        print(f"extent_{name}_m,{_fmt(result.extent[axis, 0])},{_fmt(result.extent[axis, 1])}")
    return 0


def _default_fmax(mdl: model.RobotModel, override) -> np.ndarray:
    if override is not None:
        return np.full(len(mdl.muscles), float(override))
    return np.array(
        [mdl.actuator_for(name).continuous_max_tension for name in mdl.muscle_names]
    )


def cmd_torque_bounds(args) -> int:
    mdl = _load_model(args)
    posture = _build_posture(mdl, args)
    jac = muscle.muscle_jacobian(mdl, posture)
    f_max = _default_fmax(mdl, args.fmax)
    joints = [args.joint] if args.joint else list(mdl.joint_names)
    for name in joints:
        bounds = analysis.torque_bounds(jac, f_max, name)
        print(f"bounds,{name},{_fmt(bounds.tau_min)},{_fmt(bounds.tau_max)}")
    return 0


def cmd_distribute(args) -> int:
    mdl = _load_model(args)
    posture = _build_posture(mdl, args)
    jac = muscle.muscle_jacobian(mdl, posture)
    tau = _parse_assignments(args.tau, "--tau")
    f_max = _default_fmax(mdl, args.fmax)
    result = analysis.distribute_tension(jac, tau, f_max)
    torque = muscle.torque_from_tensions(jac, result)
    target = np.array([tau.get(name, 0.0) for name in jac.joint_order])
    lines = ["muscle,tension_n"]
    for name, value in zip(result.muscle_order, result.values):
        print(f"tension,{name},{_fmt(value)}")
        lines.append(f"{name},{_fmt(value)}")
    print(f"residual_nm,{_fmt(float(np.abs(torque - target).max()))}")
    if args.out:
        _write_or_print("\n".join(lines) + "\n", args.out)
    return 0


def cmd_thermal(args) -> int:
    if (args.tension is None) == (args.tension_kgf is None):
        raise ValueError("give exactly one of --tension (N) or --tension-kgf")
    tension = args.tension if args.tension is not None else kgf_to_newton(args.tension_kgf)
    if tension < 0:
        raise ValueError("tension must be nonnegative")
    spec = bldc60_actuator(gear_ratio=args.gear_ratio)
    params = thermal.default_params()
    trace = thermal.simulate_hold(params, spec, tension, args.duration, args.sheet)
    if args.out:
        _write_or_print(thermal.trace_to_csv(trace), args.out)
    final = trace[-1]
    peak = max(s.t_motor for s in trace)
    print(f"samples,{len(trace)}")
    print(f"final_t_motor_k,{_fmt(final.t_motor)}")
    print(f"final_t_structure_k,{_fmt(final.t_structure)}")
    print(f"max_rise_k,{_fmt(peak - params.t_ambient)}")
    return 0


def cmd_swing(args) -> int:
    mdl = _load_model(args)
    if args.traj:
        with open(args.traj, "r", encoding="utf-8") as fh:
            traj = analysis.Trajectory.from_csv(fh.read())
    else:
        traj = load_default_swing()
    offset = [float(v) for v in args.head_offset.split(",")]
    if len(offset) != 3:
        raise ValueError("--head-offset must be 'x,y,z' in meters on the hand link")
    velocities = analysis.joint_velocities(traj)
    profile = analysis.head_speed(mdl, traj, offset)
    if args.out:
        _write_or_print(profile.to_csv(), args.out)
    for name, peak in velocities.peak_magnitudes().items():
        print(f"peak_joint_speed_rad_s,{name},{_fmt(peak)}")
    print(f"fastest_joint,{velocities.fastest_joint()}")
    print(f"peak_head_speed_mps,{_fmt(profile.peak)}")
    return 0


def cmd_calibrate(args) -> int:
    samples = read_calibration_csv(args.samples)
    result = calibrate_sensor(samples)
    print(f"samples,{result.num_samples}")
    print(f"gain,{_fmt(result.gain)}")
    print(f"offset_n,{_fmt(result.offset)}")
    print(f"rms_residual_n,{_fmt(result.rms_residual)}")
    return 0


def cmd_validate(args) -> int:
    mdl = _load_model(args)
    print(f"model,{mdl.metadata.name}")
    print(f"links,{len(mdl.links)}")
    print(f"joints,{len(mdl.joints)}")
    print(f"muscles,{len(mdl.muscles)}")
    print(f"actuators,{len(mdl.actuators)}")
    print("valid,true")
    return 0


def load_default_swing() -> analysis.Trajectory:
    """The shipped reconstructed badminton-swing trajectory."""
    from importlib import resources

    text = (
        resources.files("radioulnar")
        .joinpath("data/swing_trajectory.csv")
        .read_text(encoding="utf-8")
    )
    return analysis.Trajectory.from_csv(text)


DEFAULT_HEAD_OFFSET = "0.0,0.475,0.0"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radioulnar",
        description="Tendon-driven forearm analysis toolkit",
    )
    parser.add_argument("--model", help="model JSON path (default: shipped forearm)")
    parser.add_argument("--out", help="output file path (command-specific payload)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for commands that generate randomized data")
    sub = parser.add_subparsers(dest="command", required=True)

    def posture_flags(p):
        p.add_argument("--posture", help="JSON file of joint: radians")
        p.add_argument("--angle", action="append", metavar="JOINT=RAD")
        p.add_argument("--angle-deg", action="append", metavar="JOINT=DEG")

    p = sub.add_parser("fk", help="forward kinematics: link poses and palm point")
    posture_flags(p)
    p.add_argument("--check-limits", action="store_true")
    p.set_defaults(func=cmd_fk)

    p = sub.add_parser("workspace", help="palm reachability over joint-range grid")
    p.add_argument("--joints", help="comma-separated joint names (default: tagged sweep)")
    p.add_argument("--resolution", type=int, default=25)
    p.add_argument("--straight-axis", action="store_true",
                   help="replace the radioulnar axis with the forearm long-axis")
    p.set_defaults(func=cmd_workspace)

    p = sub.add_parser("torque-bounds", help="feasible torque range per joint")
    posture_flags(p)
    p.add_argument("--joint", help="single joint (default: all)")
    p.add_argument("--fmax", type=float, help="uniform tension cap in N "
                   "(default: per-muscle continuous rating)")
    p.set_defaults(func=cmd_torque_bounds)

    p = sub.add_parser("distribute", help="minimum-norm tensions for a torque target")
    posture_flags(p)
    p.add_argument("--tau", action="append", metavar="JOINT=NM",
                   help="desired torque; unlisted joints target 0")
    p.add_argument("--fmax", type=float)
    p.set_defaults(func=cmd_distribute)

    p = sub.add_parser("thermal", help="motor temperature while holding a tension")
    p.add_argument("--tension", type=float, help="held tension in N")
    p.add_argument("--tension-kgf", type=float, help="held tension in kgf")
    p.add_argument("--duration", type=float, default=600.0)
    p.add_argument("--gear-ratio", type=float, default=157.0)
    sheet = p.add_mutually_exclusive_group()
    sheet.add_argument("--sheet", dest="sheet", action="store_true", default=True)
    sheet.add_argument("--no-sheet", dest="sheet", action="store_false")
    p.set_defaults(func=cmd_thermal)

    p = sub.add_parser("swing", help="joint velocities and racket-head speed")
    p.add_argument("--traj", help="trajectory CSV (default: shipped swing)")
    p.add_argument("--head-offset", default=DEFAULT_HEAD_OFFSET,
                   metavar="X,Y,Z", help="head point on the hand link, meters")
    p.set_defaults(func=cmd_swing)

    p = sub.add_parser("calibrate", help="fit gain/offset from sensor samples")
    p.add_argument("--samples", required=True, help="CSV raw,tension_newtons")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("validate", help="load and validate a model file")
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleTargetError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 1
    except (ModelError, PostureError, SensorRangeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
