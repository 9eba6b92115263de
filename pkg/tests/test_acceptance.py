"""Acceptance gate: one test per criterion, each printing a pass/fail line
and enforcing its stated tolerance and runtime budget.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion lines.
"""

import json
import math
import time

import numpy as np
import pytest

from radioulnar.actuation import (
    calibrate_sensor,
    default_sensor_geometry,
    bldc60_actuator,
    heat_power_from_tension,
    unit_tension_from_loadcell,
)
from radioulnar.analysis import (
    Trajectory,
    distribute_tension,
    head_speed,
    joint_velocities,
    reachable_set,
    slant_speed_gain,
    torque_bounds,
)
from radioulnar.cli import DEFAULT_HEAD_OFFSET, load_default_swing
from radioulnar.kinematics import Posture, check_limits
from radioulnar.model import load_default_model, load_model, straight_axis_variant
from radioulnar.muscle import MuscleJacobian, muscle_jacobian, torque_from_tensions
from radioulnar.thermal import (
    ambient_state,
    default_params,
    simulate_hold,
    steady_state,
    thermal_step,
    time_constants,
)
from radioulnar.units import kgf_to_newton, newton_to_kgf

from conftest import toy_doc
from test_analysis import enumerate_bounds, grid_oracle, random_feasible_instance
from test_muscle import cosine_law_derivative, steps_agree


def report(number, description, elapsed, budget):
    print(f"PASS criterion {number}: {description} ({elapsed*1e3:.2f} ms, budget {budget*1e3:.0f} ms)")
    assert elapsed < budget, f"criterion {number} exceeded its runtime budget"


def test_criterion_01_lever_equation_exactness():
    geom = default_sensor_geometry()
    unit_tension_from_loadcell(geom, kgf_to_newton(50.0))  # warm-up
    start = time.perf_counter()
    tension = unit_tension_from_loadcell(geom, kgf_to_newton(50.0))
    elapsed = time.perf_counter() - start
    assert abs(newton_to_kgf(tension) - 56.5) / 56.5 <= 1e-9
    report(1, "lever-arm tension map gives 56.5 kgf at the 50 kgf cell limit", elapsed, 1e-3)


def test_criterion_02_calibration_recovery():
    start = time.perf_counter()
    raw = np.linspace(0.0, 490.0, 100)
    exact = calibrate_sensor(list(zip(raw, 1.13 * raw)))
    assert abs(exact.gain - 1.13) <= 1e-12

    rng = np.random.default_rng(20240817)
    raw = rng.uniform(0.0, 490.0, 100)
    noisy = 1.13 * raw * (1.0 + rng.uniform(-0.01, 0.01, 100))
    fitted = calibrate_sensor(list(zip(raw, noisy)))
    elapsed = time.perf_counter() - start
    assert abs(fitted.gain - 1.13) / 1.13 <= 0.01
    report(2, "calibration recovers gain 1.13 (exact noiseless, <=1% with 1% noise)",
           elapsed, 1.0)


def test_criterion_03_jacobian_correctness():
    start = time.perf_counter()
    toy = load_model(json.dumps(toy_doc()))
    for theta in (-1.1, -0.4, 0.3, 0.7, 1.4):
        jac = muscle_jacobian(toy, Posture(dict(hinge=theta)))
        analytic = cosine_law_derivative(theta)
        assert abs(jac.matrix[0, 0] - analytic) <= 1e-6 * abs(analytic)

    shipped = load_default_model()
    rng = np.random.default_rng(31415)
    for _ in range(100):
        angles = {
            j.name: float(rng.uniform(j.angle_min, j.angle_max)) for j in shipped.joints
        }
        j1 = muscle_jacobian(shipped, Posture(angles), h=1e-5).matrix
        j2 = muscle_jacobian(shipped, Posture(angles), h=1e-6).matrix
        assert steps_agree(j1, j2, rtol=1e-5)
    elapsed = time.perf_counter() - start
    report(3, "finite-difference Jacobian: analytic toy <=1e-6, two-step <=1e-5 "
              "at 100 random postures", elapsed, 10.0)


def test_criterion_04_torque_bounds_vertex_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(271828)
    for _ in range(200):
        n = int(rng.integers(1, 9))
        m = int(rng.integers(1, 5))
        matrix = rng.uniform(-1.0, 1.0, (n, m))
        f_max = rng.uniform(0.0, 2.0, n)
        jac = MuscleJacobian(matrix, tuple(f"m{i}" for i in range(n)),
                             tuple(f"j{k}" for k in range(m)))
        k = int(rng.integers(0, m))
        lo, hi = enumerate_bounds(-matrix[:, k], f_max)
        bounds = torque_bounds(jac, f_max, f"j{k}")
        assert bounds.tau_min == lo and bounds.tau_max == hi
    elapsed = time.perf_counter() - start
    report(4, "torque bounds equal 2^n vertex enumeration exactly on 200 instances",
           elapsed, 10.0)


def test_criterion_05_tension_distribution_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(16180)
    solved = 0
    while solved < 50:
        jac, tau, f_max = random_feasible_instance(rng)
        if np.linalg.matrix_rank(-jac.matrix.T) < 2:
            continue
        expected = grid_oracle(jac.matrix, tau, f_max)
        if expected is None:
            continue
        result = distribute_tension(jac, tau, f_max)
        residual = torque_from_tensions(jac, result) - tau
        assert np.abs(residual).max() <= 1e-8
        assert np.abs(result.values - expected).max() <= 1e-2 * f_max.max()
        assert abs(float(result.values @ result.values) - float(expected @ expected)) <= 1e-4
        solved += 1
    elapsed = time.perf_counter() - start
    report(5, "active-set QP matches grid oracle on 50 instances "
              "(<=1e-2 f_max, <=1e-4 objective, residual <=1e-8)", elapsed, 60.0)


def test_criterion_06_reachability_slanted_vs_straight():
    shipped = load_default_model()
    straight = straight_axis_variant(shipped)
    volumes = {}
    elapsed25 = None
    for res in (10, 15, 25):
        start = time.perf_counter()
        slanted_r = reachable_set(shipped, resolution=res)
        straight_r = reachable_set(straight, resolution=res)
        if res == 25:
            elapsed25 = time.perf_counter() - start
            for axis, name in enumerate("xyz"):
                lo, hi = slanted_r.extent[axis]
                print(f"    slanted extent {name}: [{lo:+.4f}, {hi:+.4f}] m")
        volumes[res] = (slanted_r.hull_volume, straight_r.hull_volume)
        assert slanted_r.hull_volume > straight_r.hull_volume
    ratios = {r: v[0] / v[1] for r, v in volumes.items()}
    report(6, "slanted hull beats straight at resolutions 10/15/25 "
              f"(ratios {ratios[10]:.3f}/{ratios[15]:.3f}/{ratios[25]:.3f})",
           elapsed25, 60.0)


def test_criterion_07_swing_arithmetic():
    start = time.perf_counter()
    gain = slant_speed_gain(7.0, 0.050, total=8.0)
    assert abs(gain.delta_v - 0.35) <= 1e-15
    assert abs(gain.percent - 4.375) <= 1e-12
    assert abs(gain.percent - 4.3) <= 0.1  # "about 4.3%"

    toy = load_model(json.dumps(toy_doc()))
    omega, radius = 1.0, 0.12
    times = np.arange(0.0, 0.3 + 1e-12, 1e-3)
    traj = Trajectory(times, (omega * times).reshape(-1, 1), ("hinge",))
    speeds = head_speed(toy, traj, (0.0, radius, 0.0)).speeds
    assert np.abs(speeds - omega * radius).max() <= 1e-6 * omega * radius
    elapsed = time.perf_counter() - start
    report(7, "slant gain 0.35 m/s = 4.375% of 8 m/s; circular head speed = omega*r",
           elapsed, 1.0)


def test_criterion_08_swing_ordering_and_peak():
    start = time.perf_counter()
    shipped = load_default_model()
    traj = load_default_swing()
    velocities = joint_velocities(traj)
    peaks = velocities.peak_magnitudes()
    fastest = velocities.fastest_joint()
    assert fastest == "radioulnar_yaw"
    assert peaks["radioulnar_yaw"] > max(
        v for k, v in peaks.items() if k != "radioulnar_yaw"
    )
    offset = [float(v) for v in DEFAULT_HEAD_OFFSET.split(",")]
    peak_speed = head_speed(shipped, traj, offset).peak
    assert abs(peak_speed - 8.0) <= 0.5
    elapsed = time.perf_counter() - start
    report(8, f"radioulnar is the fastest swing joint; head peak {peak_speed:.2f} m/s "
              "within 8 +/- 0.5", elapsed, 1.0)


def test_criterion_09_thermal_properties():
    start = time.perf_counter()
    params = default_params()
    spec = bldc60_actuator(157.0)

    traces = {
        (kgf, sheet): simulate_hold(params, spec, kgf_to_newton(kgf), 600.0, sheet)
        for kgf in (20.0, 40.0) for sheet in (True, False)
    }
    for kgf in (20.0, 40.0):
        for a, b in zip(traces[(kgf, True)][1:], traces[(kgf, False)][1:]):
            assert a.t_motor <= b.t_motor
    for sheet in (True, False):
        for a, b in zip(traces[(20.0, sheet)], traces[(40.0, sheet)]):
            assert a.t_motor <= b.t_motor

    p_heat = heat_power_from_tension(spec, kgf_to_newton(40.0))
    t_target, _ = steady_state(params, p_heat, True)
    _, tau_slow = time_constants(params, True)
    state = ambient_state(params)
    for _ in range(int(np.ceil(10 * tau_slow))):
        state = thermal_step(state, params, p_heat, 1.0, True)
    assert abs(state.t_motor - t_target) <= 1e-3 * (t_target - params.t_ambient)

    state = ambient_state(params)
    dt, energy_in, energy_out = 0.1, 0.0, 0.0
    for _ in range(6000):
        q_ma = (state.t_motor - params.t_ambient) / params.r_motor_ambient
        q_sa = (state.t_structure - params.t_ambient) / params.r_structure_ambient
        energy_in += p_heat * dt
        energy_out += (q_ma + q_sa) * dt
        state = thermal_step(state, params, p_heat, dt, True)
    stored = params.c_motor * (state.t_motor - params.t_ambient) \
        + params.c_structure * (state.t_structure - params.t_ambient)
    assert abs(energy_in - energy_out - stored) <= 0.005 * energy_in
    elapsed = time.perf_counter() - start
    report(9, "thermal orderings hold; steady state <=0.1%; energy balance <=0.5%",
           elapsed, 5.0)


def test_criterion_10_joint_limit_boundaries():
    shipped = load_default_model()
    table = {
        "elbow_pitch": (-145.0, 0.0),
        "radioulnar_yaw": (-85.0, 85.0),
        "wrist_roll": (-75.0, 85.0),
        "wrist_pitch": (-15.0, 45.0),
    }
    check_limits(shipped, Posture.zero(shipped))  # warm-up
    start = time.perf_counter()
    report_obj = check_limits(shipped, Posture.zero(shipped))
    elapsed = time.perf_counter() - start
    assert report_obj.passed

    for name, (lo_deg, hi_deg) in table.items():
        joint = shipped.joint(name)
        assert joint.angle_min == math.radians(lo_deg)
        assert joint.angle_max == math.radians(hi_deg)
        for boundary in (joint.angle_min, joint.angle_max):
            posture = Posture.zero(shipped).replace(**{name: boundary})
            assert check_limits(shipped, posture).passed
        beyond_hi = Posture.zero(shipped).replace(**{name: joint.angle_max + 1e-6})
        beyond_lo = Posture.zero(shipped).replace(**{name: joint.angle_min - 1e-6})
        assert [c.joint for c in check_limits(shipped, beyond_hi).failures] == [name]
        assert [c.joint for c in check_limits(shipped, beyond_lo).failures] == [name]
    report(10, "Table boundary angles accepted, 1e-6 rad beyond rejected", elapsed, 1e-3)


def test_criterion_11_antagonistic_bounds_and_scaling():
    start = time.perf_counter()
    shipped = load_default_model()
    jac = muscle_jacobian(shipped, Posture.zero(shipped))
    spans = {}
    for joint in ("elbow_pitch", "radioulnar_yaw", "wrist_roll", "wrist_pitch"):
        bounds = torque_bounds(jac, 424.0, joint)
        assert bounds.tau_min < 0.0 < bounds.tau_max
        spans[joint] = (bounds.tau_min, bounds.tau_max)
        for scale in (0.5, 2.0, 10.0):
            scaled = torque_bounds(jac, 424.0 * scale, joint)
            assert abs(scaled.tau_min - scale * bounds.tau_min) <= 1e-9 * abs(scale * bounds.tau_min)
            assert abs(scaled.tau_max - scale * bounds.tau_max) <= 1e-9 * abs(scale * bounds.tau_max)
    elapsed = time.perf_counter() - start
    pretty = ", ".join(f"{j} [{lo:.2f}, {hi:.2f}]" for j, (lo, hi) in spans.items())
    report(11, f"sign-spanning bounds at 424 N with linear f_max scaling: {pretty}",
           elapsed, 10.0)
