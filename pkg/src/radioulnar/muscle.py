"""Muscle path lengths, the moment-arm Jacobian, and the tension→torque map.

Sign convention, used everywhere: tau = -J^T f, where J[i, j] = d(length_i)/
d(angle_j). A muscle that shortens as a joint angle grows (negative entry)
pulls that joint positive. moment_arm = -dl/dtheta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ModelValidationError
from .kinematics import _as_vector
from .model import RobotModel

FD_STEP = 1e-5  # rad; balances truncation vs cancellation for ~0.25 m links


@dataclass
class MuscleJacobian:
    """matrix[i, j] = d(length of muscle i)/d(angle of joint j), m/rad."""

    matrix: np.ndarray
    muscle_order: tuple
    joint_order: tuple

    def joint_column(self, joint: str) -> np.ndarray:
        try:
            j = self.joint_order.index(joint)
        except ValueError:
            raise ModelValidationError(f"unknown joint '{joint}'") from None
        return self.matrix[:, j]


@dataclass
class TensionVector:
    """Per-muscle tensions in newtons; nonnegative by construction."""

    values: np.ndarray
    muscle_order: tuple

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.muscle_order),):
            raise ValueError(
                f"expected {len(self.muscle_order)} tensions, got shape {self.values.shape}"
            )
        if np.any(self.values < 0):
            raise ValueError("tensions must be nonnegative")

    @classmethod
    def from_mapping(cls, model: RobotModel, tensions: dict) -> "TensionVector":
        order = model.muscle_names
        missing = [n for n in order if n not in tensions]
        if missing:
            raise ValueError(f"missing tension for muscle '{missing[0]}'")
        return cls(np.array([float(tensions[n]) for n in order]), order)

    def exceeds_continuous(self, model: RobotModel) -> tuple:
        """Muscles whose tension exceeds their actuator's continuous rating."""
        over = []
        for name, f in zip(self.muscle_order, self.values):
            if f > model.actuator_for(name).continuous_max_tension:
                over.append(name)
        return tuple(over)


def muscle_length(model: RobotModel, posture, muscle: str) -> float:
    """Polyline length through the muscle's via points at this posture (m)."""
    num = model.numeric()
    if muscle not in num.muscle_index:
        raise ModelValidationError(f"unknown muscle '{muscle}'")
    angles = _as_vector(model, posture).reshape(1, -1)
    return float(num.lengths_batch(angles)[0, num.muscle_index[muscle]])


def muscle_lengths(model: RobotModel, posture) -> np.ndarray:
    """All muscle lengths in model order (m)."""
    angles = _as_vector(model, posture).reshape(1, -1)
    return model.numeric().lengths_batch(angles)[0]


def muscle_jacobian(model: RobotModel, posture, h: float = FD_STEP) -> MuscleJacobian:
    """Central finite differences, step h per joint; deterministic."""
    num = model.numeric()
    base = _as_vector(model, posture)
    n_joints = num.num_joints
    probes = np.tile(base, (2 * n_joints, 1))
    for j in range(n_joints):
        probes[2 * j, j] += h
        probes[2 * j + 1, j] -= h
    lengths = num.lengths_batch(probes)
    matrix = np.empty((num.num_muscles, n_joints))
    for j in range(n_joints):
        matrix[:, j] = (lengths[2 * j] - lengths[2 * j + 1]) / (2.0 * h)
    return MuscleJacobian(matrix, num.muscle_names, num.joint_names)


def moment_arm(model: RobotModel, posture, muscle: str, joint: str,
               h: float = FD_STEP) -> float:
    """-dl/dtheta for one muscle/joint pair (m)."""
    num = model.numeric()
    if muscle not in num.muscle_index:
        raise ModelValidationError(f"unknown muscle '{muscle}'")
    if joint not in num.joint_index:
        raise ModelValidationError(f"unknown joint '{joint}'")
    base = _as_vector(model, posture)
    j = num.joint_index[joint]
    probes = np.tile(base, (2, 1))
    probes[0, j] += h
    probes[1, j] -= h
    lengths = num.lengths_batch(probes)[:, num.muscle_index[muscle]]
    return float(-(lengths[0] - lengths[1]) / (2.0 * h))


def torque_from_tensions(jac: MuscleJacobian, tensions) -> np.ndarray:
    """Joint torques tau = -J^T f (Nm), in the Jacobian's joint order."""
    if isinstance(tensions, TensionVector):
        if tensions.muscle_order != jac.muscle_order:
            raise ValueError("tension vector and Jacobian muscle orders differ")
        f = tensions.values
    else:
        f = np.asarray(tensions, dtype=float)
    if f.shape != (len(jac.muscle_order),):
        raise ValueError(
            f"expected {len(jac.muscle_order)} tensions, got shape {f.shape}"
        )
    if np.any(f < 0):
        raise ValueError("tensions must be nonnegative")
    return -(jac.matrix.T @ f)
