"""Compare the compiled kernels with the pure-Python fallback.

Kernel timings call both backends in-process. The end-to-end timing runs the
depth-12 Kasner singleton check in a subprocess per backend, selecting the
fallback with COUPLED_ENTROPY_PURE_PYTHON=1.

    python benchmarks/bench_kernels.py [--repeat 5] [--depth 12]
"""
import argparse
import math
import os
import subprocess
import sys
import timeit

import numpy as np

from coupled_entropy import _pykernels, kernels

E2E = """
import time
from coupled_entropy import kernels
from coupled_entropy.kasner import kasner_system
from coupled_entropy.semiconj import singleton_check
T, P, A = kasner_system()
best = float("inf")
for _ in range({repeat}):
    t = time.perf_counter()
    singleton_check(T, P, A, {depth}, 1e-9)
    best = min(best, time.perf_counter() - t)
print(kernels.BACKEND, best)
"""


def kernel_cases():
    rng = np.random.default_rng(0)
    ts = rng.uniform(0.0, math.pi / 3, 1000)
    vs = [_pykernels.phi0(float(t)) for t in ts]
    grid = np.linspace(0.0, 2 * math.pi, 100000, endpoint=False)
    a = (rng.random((8, 8)) < 0.4).astype(float) + np.eye(8, k=1) + np.eye(8, k=-7)
    a = (a > 0).astype(float)
    return {
        "phi0_inverse x1000": lambda k: [k.phi0_inverse(v, 4e-16) for v in vs],
        "kasner_angle_array 1e5": lambda k: k.kasner_angle_array(grid),
        "kasner_angle x1000": lambda k: [k.kasner_angle(float(t)) for t in ts],
        "power_iterate 8x8": lambda k: k.power_iterate(a, 1e-12, 10**6),
    }


def end_to_end(repeat, depth):
    out = {}
    for label, pure in (("compiled", False), ("python", True)):
        env = dict(os.environ)
        env.pop("COUPLED_ENTROPY_PURE_PYTHON", None)
        if pure:
            env["COUPLED_ENTROPY_PURE_PYTHON"] = "1"
        res = subprocess.run(
            [sys.executable, "-c", E2E.format(repeat=repeat, depth=depth)], env=env, capture_output=True, text=True, check=True
        )
        backend, secs = res.stdout.split()
        out[label] = (backend, float(secs))
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--depth", type=int, default=12)
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "compiled" not in backends:
        print("compiled backend not built; only the fallback is available")
    print(f"{'kernel':28s} {'compiled ms':>12s} {'python ms':>12s} {'speedup':>8s}")
    for name, fn in kernel_cases().items():
        row = {}
        for label, k in backends.items():
            row[label] = 1e3 * min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat))
        c, p = row.get("compiled", math.nan), row["python"]
        print(f"{name:28s} {c:12.3f} {p:12.3f} {p / c:8.1f}")

    e2e = end_to_end(args.repeat, args.depth)
    (cb, c), (pb, p) = e2e["compiled"], e2e["python"]
    print(f"{'singleton_check depth ' + str(args.depth):28s} {c * 1e3:12.1f} {p * 1e3:12.1f} {p / c:8.1f}   ({cb} vs {pb})")


if __name__ == "__main__":
    main()
