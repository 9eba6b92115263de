"""Simulation and analysis toolkit for a tendon-driven forearm with a
slanted radioulnar joint: kinematics, muscle moment arms, feasible torques,
tension distribution, sensor calibration, motor thermal behavior, workspace
reachability, and swing-speed analysis."""

from ._core import available_backends, backend_name, use_backend
from .model import (
    RobotModel,
    load_default_model,
    load_model,
    load_model_file,
    serialize_model,
    straight_axis_variant,
)

__version__ = "0.1.0"

__all__ = [
    "RobotModel",
    "load_model",
    "load_model_file",
    "load_default_model",
    "serialize_model",
    "straight_axis_variant",
    "backend_name",
    "available_backends",
    "use_backend",
    "__version__",
]
