"""Motor/gear/pulley winding model and tension-sensor calibration.

The lever-arm sensor maps a load-cell force F to wire tension via
T = r3 / (r1 + r2) * F (moment balance about the unit's shaft). The shipped
geometry (r1 = r2 = 5 mm, r3 = 11.3 mm) gives a 1.13 gain, so a 50 kgf cell
rates the unit at 56.5 kgf.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SensorRangeError
from .units import KGF_TO_NEWTON


@dataclass(frozen=True)
class ActuatorSpec:
    """Gearmotor + winding pulley parameters.

    winding_resistance and torque_constant are fitted placeholders (the motor
    electrical constants are not public); everything that depends on them is
    exercised through scaling laws, not absolute values.
    """

    gear_ratio: float
    pulley_radius: float            # m
    efficiency: float               # 0..1
    continuous_max_tension: float   # N
    no_load_winding_rate: float     # m/s
    winding_resistance: float       # ohm
    torque_constant: float          # Nm/A

    def __post_init__(self):
        for name in (
            "gear_ratio", "pulley_radius", "efficiency", "continuous_max_tension",
            "no_load_winding_rate", "winding_resistance", "torque_constant",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"ActuatorSpec.{name} must be positive")
        if self.efficiency > 1.0:
            raise ValueError("ActuatorSpec.efficiency must be <= 1")


@dataclass(frozen=True)
class SensorGeometry:
    """Lever arms of the tension-measurement unit and its load-cell rating."""

    r1: float            # m
    r2: float            # m
    r3: float            # m
    loadcell_max: float  # N

    def __post_init__(self):
        for name in ("r1", "r2", "r3", "loadcell_max"):
            if getattr(self, name) <= 0:
                raise ValueError(f"SensorGeometry.{name} must be positive")

    @property
    def gain(self) -> float:
        return self.r3 / (self.r1 + self.r2)

    @property
    def rated_tension(self) -> float:
        """Largest measurable wire tension (N)."""
        return self.gain * self.loadcell_max


def default_sensor_geometry() -> SensorGeometry:
    """Shipped unit: r1 = r2 = 5.0 mm, r3 = 11.3 mm, 50 kgf load cell."""
    return SensorGeometry(r1=0.005, r2=0.005, r3=0.0113,
                          loadcell_max=50.0 * KGF_TO_NEWTON)


def bldc60_actuator(gear_ratio: float = 157.0) -> ActuatorSpec:
    """Shipped gearmotor spec for the 8 mm pulley modules.

    The 157:1 variant carries the measured ratings (424 N continuous tension,
    116 mm/s no-load rate); other ratios scale those linearly, and efficiency
    plus the electrical constants are documented estimates.
    """
    return ActuatorSpec(
        gear_ratio=gear_ratio,
        pulley_radius=0.004,
        efficiency=0.85,
        continuous_max_tension=424.0 * gear_ratio / 157.0,
        no_load_winding_rate=0.116 * 157.0 / gear_ratio,
        winding_resistance=0.65,
        torque_constant=0.0067,
    )


def unit_tension_from_loadcell(geom: SensorGeometry, loadcell_force: float) -> float:
    """Wire tension (N) from a load-cell reading; rejects out-of-range input."""
    if not 0.0 <= loadcell_force <= geom.loadcell_max:
        raise SensorRangeError(
            f"load-cell reading {loadcell_force:.6g} N outside [0, {geom.loadcell_max:.6g}] N"
        )
    return geom.gain * loadcell_force


@dataclass(frozen=True)
class CalibrationResult:
    gain: float
    offset: float
    rms_residual: float
    num_samples: int


def read_calibration_csv(path) -> list:
    """Read `raw,tension_newtons` samples from a CSV file; header optional."""
    samples = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if len(cells) != 2:
                raise ValueError(f"{path}:{line_no}: expected 'raw,tension_newtons'")
            try:
                samples.append((float(cells[0]), float(cells[1])))
            except ValueError:
                if line_no == 1:
                    continue  # header
                raise ValueError(f"{path}:{line_no}: non-numeric sample") from None
    return samples


def calibrate_sensor(samples) -> CalibrationResult:
    """Least-squares line through (raw reading, applied tension) samples.

    Needs >= 2 samples with distinct raw readings; rms_residual is the RMS
    of tension minus the fitted line.
    """
    data = np.asarray(list(samples), dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 2:
        raise ValueError("need at least 2 (raw, tension) samples")
    raw, tension = data[:, 0], data[:, 1]
    if np.ptp(raw) == 0.0:
        raise ValueError("degenerate samples: all raw readings are identical")
    design = np.column_stack([raw, np.ones_like(raw)])
    (gain, offset), *_ = np.linalg.lstsq(design, tension, rcond=None)
    residual = tension - (gain * raw + offset)
    rms = float(np.sqrt(np.mean(residual ** 2)))
    return CalibrationResult(float(gain), float(offset), rms, data.shape[0])


def winding_tension(spec: ActuatorSpec, motor_torque: float) -> float:
    """Wire tension (N) produced by a motor torque (Nm) through gear + pulley."""
    if motor_torque < 0:
        raise ValueError("motor torque must be nonnegative")
    return spec.efficiency * spec.gear_ratio * motor_torque / spec.pulley_radius


def winding_rate(spec: ActuatorSpec, motor_speed: float) -> float:
    """Wire take-up speed (m/s) at a motor shaft speed (rad/s)."""
    if motor_speed < 0:
        raise ValueError("motor speed must be nonnegative")
    return motor_speed * spec.pulley_radius / spec.gear_ratio


def heat_power_from_tension(spec: ActuatorSpec, tension: float) -> float:
    """Joule heating (W) while holding a wire tension (N).

    Back-computes motor torque, hence current through the torque constant,
    and dissipates I^2 R in the winding.
    """
    if tension < 0:
        raise ValueError("tension must be nonnegative")
    motor_torque = tension * spec.pulley_radius / (spec.gear_ratio * spec.efficiency)
    current = motor_torque / spec.torque_constant
    return current * current * spec.winding_resistance
