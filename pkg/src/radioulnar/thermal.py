"""Two-node lumped thermal model: motor node and bone-structure node.

The motor node receives Joule heat and exchanges with the structure through
either the heat-transfer-sheet resistance or the (much larger) air-gap
resistance; both nodes also leak to ambient. Integration is explicit Euler,
which is stable here because the fastest network time constant of the
shipped parameters (~25 s) is far above the 1 s step-size cap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .actuation import ActuatorSpec, heat_power_from_tension
from .units import KGF_TO_NEWTON

MAX_STEP_S = 1.0

# Largest motor-temperature rise still considered negligible for the
# long-duration low-tension hold scenario. Fitted, like the parameters below.
NEGLIGIBLE_RISE_K = 2.0

DANGLING_MAX_TENSION = 30.0 * KGF_TO_NEWTON


@dataclass(frozen=True)
class ThermalParams:
    """Capacitances (J/K), resistances (K/W) and ambient (K).

    The sheet resistance must beat the air-gap resistance; that inequality is
    the whole point of the sheet.
    """

    c_motor: float
    c_structure: float
    r_motor_structure_sheet: float
    r_motor_structure_air: float
    r_motor_ambient: float
    r_structure_ambient: float
    t_ambient: float

    def __post_init__(self):
        for name in (
            "c_motor", "c_structure", "r_motor_structure_sheet",
            "r_motor_structure_air", "r_motor_ambient", "r_structure_ambient",
            "t_ambient",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"ThermalParams.{name} must be positive")
        if not self.r_motor_structure_sheet < self.r_motor_structure_air:
            raise ValueError(
                "sheet resistance must be below the air-gap resistance"
            )

    def r_motor_structure(self, with_sheet: bool) -> float:
        return self.r_motor_structure_sheet if with_sheet else self.r_motor_structure_air


@dataclass(frozen=True)
class ThermalState:
    t_motor: float      # K
    t_structure: float  # K
    time: float         # s


def default_params() -> ThermalParams:
    """Shipped parameters, fitted to reproduce the qualitative behavior of a
    60 W gearmotor bolted to an aluminum bone structure. Estimates, not
    measurements; every test on them is a property (ordering, conservation)."""
    return ThermalParams(
        c_motor=45.0,
        c_structure=800.0,
        r_motor_structure_sheet=0.8,
        r_motor_structure_air=10.0,
        r_motor_ambient=12.0,
        r_structure_ambient=2.0,
        t_ambient=298.15,
    )


def ambient_state(params: ThermalParams, time: float = 0.0) -> ThermalState:
    return ThermalState(params.t_ambient, params.t_ambient, time)


def thermal_step(state: ThermalState, params: ThermalParams, p_heat: float,
                 dt: float, with_sheet: bool) -> ThermalState:
    """One explicit-Euler step of the two-node network."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if dt > MAX_STEP_S:
        raise ValueError(f"dt must be <= {MAX_STEP_S} s for explicit integration")
    r_ms = params.r_motor_structure(with_sheet)
    q_ms = (state.t_motor - state.t_structure) / r_ms
    q_ma = (state.t_motor - params.t_ambient) / params.r_motor_ambient
    q_sa = (state.t_structure - params.t_ambient) / params.r_structure_ambient
    t_motor = state.t_motor + dt * (p_heat - q_ms - q_ma) / params.c_motor
    t_structure = state.t_structure + dt * (q_ms - q_sa) / params.c_structure
    return ThermalState(t_motor, t_structure, state.time + dt)


def steady_state(params: ThermalParams, p_heat: float, with_sheet: bool):
    """Closed-form equilibrium (t_motor, t_structure) of the resistor network."""
    r_ms = params.r_motor_structure(with_sheet)
    a = np.array(
        [
            [1.0 / r_ms + 1.0 / params.r_motor_ambient, -1.0 / r_ms],
            [-1.0 / r_ms, 1.0 / r_ms + 1.0 / params.r_structure_ambient],
        ]
    )
    rise = np.linalg.solve(a, np.array([p_heat, 0.0]))
    return params.t_ambient + rise[0], params.t_ambient + rise[1]


def time_constants(params: ThermalParams, with_sheet: bool):
    """(fast, slow) time constants of the linear network, seconds."""
    r_ms = params.r_motor_structure(with_sheet)
    a = np.array(
        [
            [-(1.0 / r_ms + 1.0 / params.r_motor_ambient) / params.c_motor,
             1.0 / (r_ms * params.c_motor)],
            [1.0 / (r_ms * params.c_structure),
             -(1.0 / r_ms + 1.0 / params.r_structure_ambient) / params.c_structure],
        ]
    )
    eigenvalues = np.linalg.eigvals(a)
    taus = sorted(float(-1.0 / ev.real) for ev in eigenvalues)
    return taus[0], taus[1]


def simulate_hold(params: ThermalParams, spec: ActuatorSpec, tension: float,
                  duration: float, with_sheet: bool):
    """Temperature trace while holding a constant tension (N), sampled at 1 Hz
    from ambient; the final partial second is included."""
    if duration <= 0.0:
        raise ValueError("duration must be positive")
    p_heat = heat_power_from_tension(spec, tension)
    state = ambient_state(params)
    trace = [state]
    remaining = duration
    while remaining > 1e-12:
        dt = min(MAX_STEP_S, remaining)
        state = thermal_step(state, params, p_heat, dt, with_sheet)
        trace.append(state)
        remaining -= dt
    return trace


@dataclass
class DanglingResult:
    traces: dict          # muscle name -> list[ThermalState]
    rise_per_muscle: dict  # muscle name -> max rise over ambient (K)

    @property
    def max_rise(self) -> float:
        return max(self.rise_per_muscle.values())


def simulate_dangling(params: ThermalParams, specs: dict, tensions: dict,
                      duration: float = 300.0) -> DanglingResult:
    """Hold fixed per-muscle tensions with the sheet installed.

    Tensions must lie in [0, 30 kgf] (the hold scenario's declared ceiling;
    zero is allowed so a no-load muscle shows zero rise). Reports the maximum
    temperature rise over ambient per muscle.
    """
    traces = {}
    rises = {}
    for name, tension in tensions.items():
        if name not in specs:
            raise ValueError(f"no actuator spec for muscle '{name}'")
        if not 0.0 <= tension <= DANGLING_MAX_TENSION + 1e-9:
            raise ValueError(
                f"tension for '{name}' must be within [0, {DANGLING_MAX_TENSION:.6g}] N"
            )
        trace = simulate_hold(params, specs[name], tension, duration, with_sheet=True)
        traces[name] = trace
        rises[name] = max(s.t_motor for s in trace) - params.t_ambient
    return DanglingResult(traces, rises)


def trace_to_csv(trace) -> str:
    """CSV text `time_s,T_motor_K,T_structure_K`, 9 significant digits."""
    lines = ["time_s,T_motor_K,T_structure_K"]
    for s in trace:
        lines.append(f"{s.time:.8e},{s.t_motor:.8e},{s.t_structure:.8e}")
    return "\n".join(lines) + "\n"


def write_trace_csv(trace, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(trace_to_csv(trace))
