"""Exception types shared across the package."""


class ModelError(ValueError):
    """Base class for model file problems."""


class ModelParseError(ModelError):
    """The model document is not syntactically valid or a field is malformed."""


class ModelValidationError(ModelError):
    """The document parsed but violates a model invariant."""


class PostureError(ValueError):
    """A posture does not cover the model's joints one-to-one."""


class SensorRangeError(ValueError):
    """Load-cell reading outside the sensor's rated range (saturation)."""


class InfeasibleTargetError(RuntimeError):
    """A desired joint torque cannot be realized with tensions in [0, f_max]."""

    def __init__(self, joint, tau_des, tau_min, tau_max):
        self.joint = joint
        self.tau_des = tau_des
        self.tau_min = tau_min
        self.tau_max = tau_max
        super().__init__(
            f"torque target {tau_des:.6g} Nm for joint '{joint}' is outside "
            f"the feasible bounds [{tau_min:.6g}, {tau_max:.6g}] Nm"
        )
