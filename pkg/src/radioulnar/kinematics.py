"""Forward kinematics over the link tree, joint-limit checks, palm point.

All functions are pure in their inputs and safe for data-parallel sampling.
Limit checking is deliberately separate from FK so workspace code can probe
beyond-limit geometry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ModelValidationError, PostureError
from .geometry import Transform
from .model import RobotModel


@dataclass
class Posture:
    """Joint-angle assignment: exactly one entry per actuated joint."""

    angles: dict

    @classmethod
    def zero(cls, model: RobotModel) -> "Posture":
        return cls({name: 0.0 for name in model.joint_names})

    @classmethod
    def from_vector(cls, model: RobotModel, values) -> "Posture":
        values = np.asarray(values, dtype=float)
        if values.shape != (len(model.joint_names),):
            raise PostureError(
                f"expected {len(model.joint_names)} joint angles, got shape {values.shape}"
            )
        return cls(dict(zip(model.joint_names, values.tolist())))

    def vector(self, model: RobotModel) -> np.ndarray:
        """Angles in the model's joint order; rejects missing or unknown joints."""
        extra = set(self.angles) - set(model.joint_names)
        if extra:
            raise PostureError(f"posture names unknown joint '{sorted(extra)[0]}'")
        try:
            return np.array([self.angles[name] for name in model.joint_names])
        except KeyError as exc:
            raise PostureError(f"posture missing angle for joint {exc.args[0]!r}") from exc

    def replace(self, **updates) -> "Posture":
        angles = dict(self.angles)
        angles.update(updates)
        return Posture(angles)


def _as_vector(model: RobotModel, posture) -> np.ndarray:
    if isinstance(posture, Posture):
        return posture.vector(model)
    return Posture(dict(posture)).vector(model)


@dataclass
class FrameSet:
    """Base-frame pose of every link; the base link pose is the identity."""

    poses: dict

    def __getitem__(self, link_name: str) -> Transform:
        return self.poses[link_name]


def forward_kinematics(model: RobotModel, posture) -> FrameSet:
    """Pose of every link: parent pose ∘ fixed transform ∘ rotation of the
    joint angle about the joint axis (axis through the child-link origin)."""
    num = model.numeric()
    rot, trans = num.fk(_as_vector(model, posture))
    poses = {
        name: Transform(rot[i], trans[i]) for i, name in enumerate(num.link_names)
    }
    return FrameSet(poses)


def palm_point(model: RobotModel, posture) -> np.ndarray:
    """Base-frame position of the palm-center marker (meters)."""
    num = model.numeric()
    if num.marker_link < 0:
        raise ModelValidationError("model lacks a palm-center marker")
    rot, trans = num.fk(_as_vector(model, posture))
    return rot[num.marker_link] @ num.marker_offset + trans[num.marker_link]


@dataclass(frozen=True)
class JointLimitCheck:
    joint: str
    angle: float
    angle_min: float
    angle_max: float
    passed: bool


@dataclass
class LimitReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> tuple:
        return tuple(c for c in self.checks if not c.passed)


def check_limits(model: RobotModel, posture) -> LimitReport:
    """Per-joint pass/fail: passes iff angle_min <= angle <= angle_max,
    boundaries inclusive with no tolerance."""
    angles = _as_vector(model, posture)
    checks = []
    for j, joint in enumerate(model.joints):
        angle = float(angles[j])
        ok = joint.angle_min <= angle <= joint.angle_max
        checks.append(JointLimitCheck(joint.name, angle, joint.angle_min, joint.angle_max, ok))
    return LimitReport(tuple(checks))
