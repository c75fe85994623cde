#!/usr/bin/env python3
"""Time the numba kernels against their pure-numpy fallbacks.

Both variants are imported directly (bypassing the LIPIDENT_BACKEND
selection) and run on the same inputs, so the table below is a clean
apples-to-apples comparison of the two code paths.

    python3 benchmarks/bench_backends.py [--repeats N]
"""

import argparse
import os
import time

import numpy as np

from lipident import svm
from lipident._backend import BACKEND, kernels_nb, kernels_np


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    rng = np.random.default_rng(0)

    # SMO on a 200-sample rbf problem
    X = rng.normal(size=(200, 40))
    y = np.where(rng.random(200) < 0.5, -1.0, 1.0)
    X[y > 0, 0] += 1.0
    K = np.ascontiguousarray(svm.gram(svm.Kernel("rbf", gamma=0.05), X, X))

    # pivot distances over a 250-frame clip, all three metrics
    frames = rng.random((250, 8, 2))

    # edge filters on a canonical 200x300 lip crop
    img = rng.integers(0, 256, (200, 300)).astype(np.uint8)
    f64 = img.astype(np.float64)
    kern5 = np.exp(-((np.arange(5) - 2) ** 2) / 4.0)
    kern5 = np.outer(kern5, kern5)
    kern5 /= kern5.sum()
    gx, gy = kernels_np.sobel_gradients(f64)
    mag = np.sqrt(gx * gx + gy * gy)
    sup = kernels_np.nms(mag, gx, gy)
    m = sup.max()

    cases = [
        ("smo_solve 200x200", lambda k: k.smo_solve(K, y, 10.0, 1e-3, 2000, 7)),
        ("pivot_distances 250f", lambda k: k.pivot_distances(frames, 0, True, True, True)),
        ("sobel 200x300", lambda k: k.sobel_mag(img)),
        ("laplacian 200x300", lambda k: k.laplacian_abs(img)),
        ("gaussian5 200x300", lambda k: k.conv2d_replicate(f64, kern5)),
        ("nms 200x300", lambda k: k.nms(mag, gx, gy)),
        ("hysteresis 200x300", lambda k: k.hysteresis(sup, 0.1 * m, 0.3 * m)),
    ]

    print(f"active default backend: {BACKEND} (set LIPIDENT_BACKEND to switch)")
    print(f"{'kernel':<24}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, call in cases:
        call(kernels_nb)  # warm the JIT outside the timed region
        t_nb = best_of(lambda: call(kernels_nb), args.repeats)
        t_np = best_of(lambda: call(kernels_np), args.repeats)
        print(f"{name:<24}{t_nb * 1e3:>12.3f}{t_np * 1e3:>12.3f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
