"""Benchmark the numba kernels against their pure-numpy twins.

Runs each kernel pair on identical inputs, reports wall times and the
speedup, and checks that the two paths agree. The JIT path is warmed up
before timing so compilation is not counted.

Usage:
    python benchmarks/bench_kernels.py [--samples N] [--modes M] [--repeat R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from zpfsim import kernels


def time_call(fn, *args, repeat: int) -> float:
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=200_000)
    parser.add_argument("--modes", type=int, default=64)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if not kernels.HAVE_NUMBA:
        print("numba not importable: only the numpy path is available")
        return 0

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(0)))
    n = args.samples
    uni1 = rng.random(n)
    uni2 = rng.random((n, 2))
    coef_a = np.array([0.3, -0.2, 0.9])
    coef_b = np.array([-0.5, 0.1, 0.4])

    kernels.warmup()

    pairs = [
        ("phase_amps", kernels.phase_amps_np, kernels.phase_amps_jit,
         (uni1, 0.7, -0.3)),
        ("normal_amps", kernels.normal_amps_np, kernels.normal_amps_jit,
         (uni2, 0.7, -0.3)),
    ]

    print(f"{'kernel':<22} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>9} {'max|diff|':>11}")
    for name, f_np, f_jit, call_args in pairs:
        t_np = time_call(f_np, *call_args, repeat=args.repeat)
        t_jit = time_call(f_jit, *call_args, repeat=args.repeat)
        diff = np.max(np.abs(f_np(*call_args) - f_jit(*call_args)))
        print(f"{name:<22} {t_np * 1e3:>12.2f} {t_jit * 1e3:>12.2f} "
              f"{t_np / t_jit:>8.2f}x {diff:>11.2e}")

    # accumulation kernels: loop over modes as the samplers do
    for name, f_np, f_jit, uni in [
        ("accumulate_phase", kernels.accumulate_phase_np,
         kernels.accumulate_phase_jit, uni1),
        ("accumulate_normal", kernels.accumulate_normal_np,
         kernels.accumulate_normal_jit, uni2),
    ]:
        out_np = np.zeros((n, 3))
        out_jit = np.zeros((n, 3))

        def run(fn, out):
            for _ in range(args.modes):
                fn(out, uni, coef_a, coef_b)

        t_np = time_call(run, f_np, out_np, repeat=1) / args.modes
        t_jit = time_call(run, f_jit, out_jit, repeat=1) / args.modes
        diff = np.max(np.abs(out_np - out_jit)) / args.modes
        print(f"{name + ' (per mode)':<22} {t_np * 1e3:>12.2f} {t_jit * 1e3:>12.2f} "
              f"{t_np / t_jit:>8.2f}x {diff:>11.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
