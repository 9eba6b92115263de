"""Workspace reachability, feasible torque bounds, tension distribution,
and swing-speed analysis.

Reachability samples a grid over the limits of the swept joints (everything
else held at zero) and reports the convex-hull volume of the palm-point
cloud; that scalar plus per-axis extents is how the slanted-vs-straight axis
comparison is made testable. Tension distribution is a minimum-norm
active-set QP over box constraints with an equality torque target.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np
from scipy.optimize import lsq_linear
from scipy.spatial import ConvexHull

from .errors import InfeasibleTargetError, ModelValidationError
from .kinematics import Posture
from .model import RobotModel
from .muscle import MuscleJacobian, TensionVector

DEFAULT_SWEEP_ROLES = ("radioulnar", "wrist_roll", "wrist_pitch")


# ---------------------------------------------------------------------------
# workspace reachability

@dataclass
class ReachabilityResult:
    points: np.ndarray      # (N,3) palm points, meters, grid index order
    hull_volume: float      # m^3; 0 for rank-deficient (planar/linear) clouds
    extent: np.ndarray      # (3,2) per-axis min/max

    @property
    def num_points(self) -> int:
        return self.points.shape[0]


def hull_volume(points: np.ndarray) -> float:
    """Exact convex-hull volume of a 3-D point cloud; 0 if the cloud spans
    fewer than 3 dimensions."""
    points = np.asarray(points, dtype=float)
    if points.shape[0] < 4:
        return 0.0
    centered = points - points.mean(axis=0)
    singular_values = np.linalg.svd(centered, compute_uv=False)
    scale = singular_values[0]
    if scale == 0.0 or np.any(singular_values[:3] < 1e-9 * scale):
        return 0.0
    return float(ConvexHull(points).volume)


def reachable_set(model: RobotModel, joints=None, resolution: int = 25) -> ReachabilityResult:
    """Palm points over a full-range grid of the swept joints.

    joints: iterable of joint names; defaults to the metadata-tagged
    radioulnar + wrist roll/pitch sweep. Grid order is deterministic
    (index order, last joint fastest); point count is resolution**k.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    num = model.numeric()
    if num.marker_link < 0:
        raise ModelValidationError("model lacks a palm-center marker")
    if joints is None:
        joints = [model.tagged_joint(role).name for role in DEFAULT_SWEEP_ROLES]
    elif isinstance(joints, str):
        joints = [joints]
    joint_idx = []
    for name in joints:
        if name not in num.joint_index:
            raise ModelValidationError(f"unknown joint '{name}'")
        joint_idx.append(num.joint_index[name])

    axes = [
        np.linspace(num.limits_lo[j], num.limits_hi[j], resolution) for j in joint_idx
    ]
    grids = np.meshgrid(*axes, indexing="ij")
    n_points = resolution ** len(joint_idx)
    angles = np.zeros((n_points, num.num_joints))
    for k, j in enumerate(joint_idx):
        angles[:, j] = grids[k].reshape(-1)

    points = num.marker_batch(angles, num.marker_link, num.marker_offset)
    extent = np.column_stack([points.min(axis=0), points.max(axis=0)])
    return ReachabilityResult(points, hull_volume(points), extent)


def points_to_csv(points: np.ndarray) -> str:
    """CSV text `x,y,z` in meters, 9 significant digits."""
    lines = ["x,y,z"]
    for p in points:
        lines.append(f"{p[0]:.8e},{p[1]:.8e},{p[2]:.8e}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# feasible torques and tension distribution

@dataclass(frozen=True)
class TorqueBounds:
    joint: str
    tau_min: float
    tau_max: float


def _fmax_vector(jac: MuscleJacobian, f_max) -> np.ndarray:
    n = len(jac.muscle_order)
    f = np.asarray(f_max, dtype=float)
    if f.ndim == 0:
        f = np.full(n, float(f))
    if f.shape != (n,):
        raise ValueError(f"f_max must be scalar or length {n}, got shape {f.shape}")
    if np.any(f < 0):
        raise ValueError("f_max must be nonnegative")
    return f


def torque_bounds(jac: MuscleJacobian, f_max, joint: str) -> TorqueBounds:
    """Extreme torques about one joint over 0 <= f <= f_max.

    The objective is linear over a box, so each extreme sits at the vertex
    that recruits exactly the muscles whose coefficient helps.
    """
    f = _fmax_vector(jac, f_max)
    coeff = -jac.joint_column(joint)  # tau_joint = coeff . f
    hi_vertex = np.where(coeff > 0, f, 0.0)
    lo_vertex = np.where(coeff < 0, f, 0.0)
    return TorqueBounds(joint, float(coeff @ lo_vertex), float(coeff @ hi_vertex))


def _min_norm_free(a_free: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Minimum-norm solution of a_free @ x = rhs (consistent by construction)."""
    if a_free.shape[1] == 0:
        return np.zeros(0)
    solution, *_ = np.linalg.lstsq(a_free, rhs, rcond=None)
    return solution


_LOWER, _UPPER, _FREE = -1, 1, 0


def distribute_tension(jac: MuscleJacobian, tau_des, f_max,
                       residual_tol: float = 1e-8) -> TensionVector:
    """Minimum-norm tensions realizing the desired joint torques.

    Solves min ||f||^2 subject to -J^T f = tau_des, 0 <= f <= f_max with a
    primal active-set method (lowest-index pivot, so runs are reproducible).
    tau_des may be a mapping joint->Nm (missing joints mean 0) or a vector in
    the Jacobian's joint order. Raises InfeasibleTargetError otherwise.
    """
    joints = jac.joint_order
    if isinstance(tau_des, dict):
        unknown = set(tau_des) - set(joints)
        if unknown:
            raise ModelValidationError(f"unknown joint '{sorted(unknown)[0]}'")
        b = np.array([float(tau_des.get(name, 0.0)) for name in joints])
    else:
        b = np.asarray(tau_des, dtype=float)
        if b.shape != (len(joints),):
            raise ValueError(f"tau_des must have length {len(joints)}")
    upper = _fmax_vector(jac, f_max)
    a = -jac.matrix.T  # (joints x muscles)
    n = a.shape[1]

    # per-joint box bounds are a cheap necessary condition with a nameable
    # violation; the full polytope check happens in phase 1
    for j, name in enumerate(joints):
        bounds = torque_bounds(jac, upper, name)
        slack = 1e-9 * max(1.0, abs(bounds.tau_min), abs(bounds.tau_max))
        if not bounds.tau_min - slack <= b[j] <= bounds.tau_max + slack:
            raise InfeasibleTargetError(name, b[j], bounds.tau_min, bounds.tau_max)

    # phase 1: bounded least squares finds a feasible point or proves there
    # is none (the box is compact, so the minimum is attained)
    phase1 = lsq_linear(a, b, bounds=(np.zeros(n), upper), method="bvls")
    feas_tol = residual_tol * max(1.0, float(np.abs(b).max()))
    residual = a @ phase1.x - b
    if float(np.abs(residual).max()) > max(feas_tol, 1e-10):
        j = int(np.abs(residual).argmax())
        bounds = torque_bounds(jac, upper, joints[j])
        raise InfeasibleTargetError(joints[j], b[j], bounds.tau_min, bounds.tau_max)

    f = np.clip(phase1.x, 0.0, upper)
    scale = max(1.0, float(upper.max()))
    snap = 1e-10 * scale
    status = np.full(n, _FREE, dtype=int)
    status[f <= snap] = _LOWER
    status[f >= upper - snap] = _UPPER
    f[status == _LOWER] = 0.0
    f[status == _UPPER] = upper[status == _UPPER]

    for _ in range(50 * (n + 1)):
        free = status == _FREE
        rhs = b - a[:, ~free] @ f[~free]
        f_star = f.copy()
        f_star[free] = _min_norm_free(a[:, free], rhs)
        step = f_star - f

        if float(np.abs(step).max(initial=0.0)) <= 1e-12 * scale:
            # stationary on the working set: check bound multipliers
            if free.any():
                nu, *_ = np.linalg.lstsq(a[:, free].T, f[free], rcond=None)
            else:
                nu = np.zeros(a.shape[0])
            gradient = a.T @ nu  # stationarity: f = A^T nu on free coords
            release = -1
            for i in range(n):
                if status[i] == _LOWER and gradient[i] > 1e-10 * scale:
                    release = i
                    break
                if status[i] == _UPPER and gradient[i] < upper[i] - 1e-10 * scale:
                    release = i
                    break
            if release < 0:
                break
            status[release] = _FREE
            continue

        # largest feasible step toward the equality-constrained optimum
        alpha = 1.0
        blocker = -1
        blocker_bound = _FREE
        for i in range(n):
            if not free[i] or step[i] == 0.0:
                continue
            if step[i] < 0.0:
                limit = (0.0 - f[i]) / step[i]
                bound = _LOWER
            else:
                limit = (upper[i] - f[i]) / step[i]
                bound = _UPPER
            if limit < alpha - 1e-15:
                alpha = max(limit, 0.0)
                blocker = i
                blocker_bound = bound
        f = f + alpha * step
        if blocker >= 0:
            status[blocker] = blocker_bound
            f[blocker] = 0.0 if blocker_bound == _LOWER else upper[blocker]
        f = np.clip(f, 0.0, upper)

    f = np.clip(f, 0.0, upper)
    final_residual = float(np.abs(a @ f - b).max(initial=0.0))
    if final_residual > max(feas_tol, 1e-10):
        j = int(np.abs(a @ f - b).argmax())
        bounds = torque_bounds(jac, upper, joints[j])
        raise InfeasibleTargetError(joints[j], b[j], bounds.tau_min, bounds.tau_max)
    return TensionVector(f, jac.muscle_order)


# ---------------------------------------------------------------------------
# trajectories and swing analysis

@dataclass
class Trajectory:
    """Time-stamped postures with strictly increasing time."""

    times: np.ndarray   # (N,)
    angles: np.ndarray  # (N,J)
    joint_order: tuple

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.angles = np.asarray(self.angles, dtype=float)
        if self.angles.ndim != 2 or self.angles.shape[0] != self.times.shape[0]:
            raise ValueError("angles must be (num_samples, num_joints)")
        if self.angles.shape[1] != len(self.joint_order):
            raise ValueError("joint_order length must match angle columns")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory times must be strictly increasing")

    @property
    def num_samples(self) -> int:
        return self.times.shape[0]

    def posture(self, i: int) -> Posture:
        return Posture(dict(zip(self.joint_order, self.angles[i].tolist())))

    @classmethod
    def from_csv(cls, text: str) -> "Trajectory":
        """Parse `time_s,<joint names...>` CSV (angles in radians)."""
        rows = list(csv.reader(io.StringIO(text)))
        rows = [r for r in rows if r and any(cell.strip() for cell in r)]
        if len(rows) < 2:
            raise ValueError("trajectory CSV needs a header and at least one sample")
        header = [cell.strip() for cell in rows[0]]
        if header[0] != "time_s" or len(header) < 2:
            raise ValueError("trajectory CSV header must be 'time_s,<joint names...>'")
        data = np.array([[float(cell) for cell in row] for row in rows[1:]])
        return cls(data[:, 0], data[:, 1:], tuple(header[1:]))

    def to_csv(self) -> str:
        lines = ["time_s," + ",".join(self.joint_order)]
        for t, row in zip(self.times, self.angles):
            lines.append(",".join(f"{v:.8e}" for v in [t, *row]))
        return "\n".join(lines) + "\n"


def _finite_difference(times: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Central differences interiorly, one-sided at the ends."""
    if times.shape[0] < 2:
        raise ValueError("need at least 2 samples to differentiate")
    out = np.empty_like(values)
    out[0] = (values[1] - values[0]) / (times[1] - times[0])
    out[-1] = (values[-1] - values[-2]) / (times[-1] - times[-2])
    if times.shape[0] > 2:
        dt = (times[2:] - times[:-2]).reshape(-1, *([1] * (values.ndim - 1)))
        out[1:-1] = (values[2:] - values[:-2]) / dt
    return out


@dataclass
class VelocityProfile:
    times: np.ndarray
    velocities: np.ndarray  # (N,J) rad/s
    joint_order: tuple

    def peak_magnitudes(self) -> dict:
        return {
            name: float(np.abs(self.velocities[:, j]).max())
            for j, name in enumerate(self.joint_order)
        }

    def fastest_joint(self) -> str:
        peaks = self.peak_magnitudes()
        return max(peaks, key=peaks.get)


def joint_velocities(traj: Trajectory) -> VelocityProfile:
    """Joint angular velocities by finite differences over the trajectory."""
    vel = _finite_difference(traj.times, traj.angles)
    return VelocityProfile(traj.times.copy(), vel, traj.joint_order)


@dataclass
class SpeedProfile:
    times: np.ndarray
    speeds: np.ndarray  # (N,) m/s

    @property
    def peak(self) -> float:
        return float(self.speeds.max())

    def to_csv(self) -> str:
        lines = ["time_s,speed_mps"]
        for t, s in zip(self.times, self.speeds):
            lines.append(f"{t:.8e},{s:.8e}")
        return "\n".join(lines) + "\n"


def head_speed(model: RobotModel, traj: Trajectory, head_offset) -> SpeedProfile:
    """Speed profile of a hand-fixed point (e.g. a racket head) along the
    trajectory, by finite differences of its FK positions."""
    num = model.numeric()
    marker = model.metadata.palm_marker
    if marker is None:
        raise ModelValidationError("model lacks a palm-center marker (hand link unknown)")
    order = list(traj.joint_order)
    unknown = [n for n in order if n not in num.joint_index]
    if unknown:
        raise ModelValidationError(f"unknown joint '{unknown[0]}'")
    angles = np.zeros((traj.num_samples, num.num_joints))
    for k, name in enumerate(order):
        angles[:, num.joint_index[name]] = traj.angles[:, k]
    points = num.marker_batch(
        angles, num.link_index[marker.link], np.asarray(head_offset, dtype=float)
    )
    velocity = _finite_difference(traj.times, points)
    speeds = np.linalg.norm(velocity, axis=1)
    return SpeedProfile(traj.times.copy(), speeds)


@dataclass(frozen=True)
class SlantSpeedGain:
    delta_v: float          # m/s
    percent: float | None   # of the total speed, when given


def slant_speed_gain(omega: float, delta_r: float, total: float | None = None) -> SlantSpeedGain:
    """Extra tip speed from a rotation-radius increase: delta_v = omega * delta_r,
    optionally as a percentage of a total speed."""
    if omega < 0 or delta_r < 0:
        raise ValueError("omega and delta_r must be nonnegative")
    delta_v = omega * delta_r
    percent = None
    if total is not None:
        if total <= 0:
            raise ValueError("total speed must be positive to express a percentage")
        percent = 100.0 * delta_v / total
    return SlantSpeedGain(delta_v, percent)
