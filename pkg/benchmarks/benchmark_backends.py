#!/usr/bin/env python3
"""Benchmark the compiled kernel against the NumPy fallback.

Times the three hot paths on the shipped model: batched forward-kinematics
marker evaluation (workspace sampling), batched muscle lengths, and the
finite-difference Jacobian built on top of them.

Usage: python benchmarks/benchmark_backends.py [--postures N] [--repeat K]
"""

import argparse
import time

import numpy as np

from radioulnar import _core
from radioulnar.kinematics import Posture
from radioulnar.model import load_default_model
from radioulnar.muscle import muscle_jacobian


def random_batch(model, rng, n):
    lo = np.array([j.angle_min for j in model.joints])
    hi = np.array([j.angle_max for j in model.joints])
    return np.ascontiguousarray(rng.uniform(lo, hi, size=(n, lo.shape[0])))


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--postures", type=int, default=20000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    model = load_default_model()
    num = model.numeric()
    rng = np.random.default_rng(0)
    angles = random_batch(model, rng, args.postures)
    posture = Posture.zero(model)

    cases = {
        "fk_marker_batch": lambda: _core.kernels().fk_marker_batch(
            num.parent_idx, num.fixed_rot, num.fixed_trans, num.link_joint,
            num.axis_local, angles, num.marker_link, num.marker_offset),
        "muscle_lengths_batch": lambda: _core.kernels().muscle_lengths_batch(
            num.parent_idx, num.fixed_rot, num.fixed_trans, num.link_joint,
            num.axis_local, angles, num.wp_link, num.wp_offset, num.muscle_ptr),
        "muscle_jacobian x100": lambda: [muscle_jacobian(model, posture) for _ in range(100)],
    }

    available = _core.available_backends()
    print(f"postures: {args.postures}, repeat: {args.repeat} (best-of)")
    print(f"backends: {', '.join(available)}")
    header = f"{'kernel':24s}" + "".join(f"{b:>14s}" for b in available) + f"{'speedup':>10s}"
    print(header)
    print("-" * len(header))
    for name, fn in cases.items():
        timings = {}
        for backend in available:
            _core.use_backend(backend)
            fn()  # warm-up
            timings[backend] = best_of(args.repeat, fn)
        row = f"{name:24s}" + "".join(f"{timings[b]*1e3:12.2f}ms" for b in available)
        if "compiled" in timings and "python" in timings:
            row += f"{timings['python'] / timings['compiled']:9.1f}x"
        print(row)
    _core.use_backend(available[-1] if "compiled" not in available else "compiled")


if __name__ == "__main__":
    main()
