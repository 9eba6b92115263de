"""Rigid-transform primitives shared by the model and kinematics layers."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def rotation_about_axis(axis, angle: float) -> np.ndarray:
    """Rotation matrix for `angle` radians about a unit 3-vector (Rodrigues)."""
    x, y, z = float(axis[0]), float(axis[1]), float(axis[2])
    c = math.cos(angle)
    s = math.sin(angle)
    k = 1.0 - c
    return np.array(
        [
            [c + x * x * k, x * y * k - z * s, x * z * k + y * s],
            [y * x * k + z * s, c + y * y * k, y * z * k - x * s],
            [z * x * k - y * s, z * y * k + x * s, c + z * z * k],
        ]
    )


def rpy_matrix(roll: float, pitch: float, yaw: float) -> np.ndarray:
    """Fixed-axis x-y-z rotation: R = Rz(yaw) @ Ry(pitch) @ Rx(roll)."""
    rx = rotation_about_axis((1.0, 0.0, 0.0), roll)
    ry = rotation_about_axis((0.0, 1.0, 0.0), pitch)
    rz = rotation_about_axis((0.0, 0.0, 1.0), yaw)
    return rz @ ry @ rx


def rpy_from_matrix(r: np.ndarray) -> tuple[float, float, float]:
    """Inverse of rpy_matrix for non-degenerate pitch (|pitch| < pi/2)."""
    pitch = math.asin(max(-1.0, min(1.0, -float(r[2, 0]))))
    roll = math.atan2(float(r[2, 1]), float(r[2, 2]))
    yaw = math.atan2(float(r[1, 0]), float(r[0, 0]))
    return roll, pitch, yaw


@dataclass(eq=False)
class Transform:
    """Rigid transform: p_parent = rotation @ p_child + translation."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        self.rotation = np.asarray(self.rotation, dtype=float).reshape(3, 3)
        self.translation = np.asarray(self.translation, dtype=float).reshape(3)

    @classmethod
    def identity(cls) -> "Transform":
        return cls(np.eye(3), np.zeros(3))

    def compose(self, other: "Transform") -> "Transform":
        """self applied after other: (self ∘ other)(p) = self(other(p))."""
        return Transform(
            self.rotation @ other.rotation,
            self.rotation @ other.translation + self.translation,
        )

    def apply(self, point) -> np.ndarray:
        return self.rotation @ np.asarray(point, dtype=float) + self.translation

    def __eq__(self, other) -> bool:
        if not isinstance(other, Transform):
            return NotImplemented
        return np.array_equal(self.rotation, other.rotation) and np.array_equal(
            self.translation, other.translation
        )
