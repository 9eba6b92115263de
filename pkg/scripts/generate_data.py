#!/usr/bin/env python3
"""Regenerate the shipped CSV data files (deterministic).

- swing_trajectory.csv: reconstructed badminton-style swing. Minimum-jerk
  profiles per joint, radioulnar pronation deliberately the fastest joint;
  with the default head offset (0, 0.475, 0) m on the hand link the peak
  head speed lands at ~8 m/s.
- calibration_samples.csv: synthetic tension-sensor samples from the lever
  geometry gain 11.3/(5+5) = 1.13 with seeded +/-1% multiplicative noise.
"""

from pathlib import Path

import numpy as np

from radioulnar.analysis import Trajectory

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "radioulnar" / "data"

SEED = 20240817


def minimum_jerk(t, t0, t1, start, end):
    s = np.clip((t - t0) / (t1 - t0), 0.0, 1.0)
    return start + (end - start) * (10 * s**3 - 15 * s**4 + 6 * s**5)


def make_swing() -> Trajectory:
    t = np.round(np.arange(0.0, 0.6 + 1e-9, 0.002), 6)
    grip = np.full_like(t, 0.5)
    columns = {
        "elbow_pitch": minimum_jerk(t, 0.05, 0.55, -1.5, -0.4),
        "radioulnar_yaw": minimum_jerk(t, 0.15, 0.45, -1.3, 1.3),
        "wrist_roll": minimum_jerk(t, 0.20, 0.50, -0.9, 0.9),
        "wrist_pitch": minimum_jerk(t, 0.20, 0.50, -0.2, 0.6),
        "finger_thumb": grip,
        "finger_index_middle": grip,
        "finger_ring_little": grip,
    }
    angles = np.column_stack(list(columns.values()))
    return Trajectory(t, angles, tuple(columns))


def make_calibration(rng: np.random.Generator) -> str:
    gain = 11.3 / 10.0
    raw = np.sort(rng.uniform(0.0, 490.0, size=100))
    tension = gain * raw * (1.0 + rng.uniform(-0.01, 0.01, size=100))
    lines = ["raw,tension_newtons"]
    lines += [f"{r:.8e},{t:.8e}" for r, t in zip(raw, tension)]
    return "\n".join(lines) + "\n"


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    (DATA_DIR / "swing_trajectory.csv").write_text(make_swing().to_csv())
    rng = np.random.default_rng(SEED)
    (DATA_DIR / "calibration_samples.csv").write_text(make_calibration(rng))
    print(f"wrote {DATA_DIR / 'swing_trajectory.csv'}")
    print(f"wrote {DATA_DIR / 'calibration_samples.csv'}")


if __name__ == "__main__":
    main()
