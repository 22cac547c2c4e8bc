"""Timing comparison of the numba and numpy kernel backends.

Usage: python benchmarks/bench_kernels.py [--sizes 100000 1000000]

Runs the three hot kernels (Bessel sampling, quadrature collapse,
per-node spectral reduction) under both backends in subprocesses, since
the backend is frozen at import time by DELTALAP_BACKEND.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import textwrap

_WORKER = textwrap.dedent(
    """
    import json, sys, time
    import numpy as np
    from deltalap import backend, kernels
    from deltalap.special import phi0_array

    size = int(sys.argv[1])
    rng = np.random.default_rng(0)
    r = rng.uniform(1e-3, 40.0, size)
    phi = phi0_array(r)
    nodes = 400
    coefs = rng.standard_normal(nodes) + 1j * rng.standard_normal(nodes)
    shifts = np.sort(rng.uniform(1.0, 1e6, nodes))
    lam = rng.uniform(0.0, 1e4, size // 10)
    g = rng.standard_normal(size // 10) + 1j * rng.standard_normal(size // 10)

    def bench(fn, *args, reps=3):
        fn(*args)  # warm-up (numba compilation)
        best = float("inf")
        for _ in range(reps):
            t0 = time.perf_counter()
            fn(*args)
            best = min(best, time.perf_counter() - t0)
        return best

    out = {
        "backend": backend.backend_name(),
        "k0_real": bench(kernels.k0_real, r),
        "remainder_real": bench(kernels.remainder_real, r, phi),
        "sum_nodes": bench(kernels.sum_nodes, coefs, shifts, lam),
        "reduce_lam": bench(kernels.reduce_lam, g, lam, shifts),
    }
    print(json.dumps(out))
    """
)


def run_backend(name: str, size: int) -> dict:
    env = dict(os.environ, DELTALAP_BACKEND=name)
    res = subprocess.run(
        [sys.executable, "-c", _WORKER, str(size)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(res.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[200_000, 2_000_000])
    args = ap.parse_args()
    for size in args.sizes:
        print(f"\n== array size {size} ==")
        results = {}
        for name in ("numpy", "numba"):
            try:
                results[name] = run_backend(name, size)
            except subprocess.CalledProcessError as exc:
                print(f"{name}: failed ({exc.stderr.strip().splitlines()[-1]})")
        if len(results) < 2:
            continue
        keys = [k for k in results["numpy"] if k != "backend"]
        print(f"{'kernel':<16}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>9}")
        for k in keys:
            a = results["numpy"][k] * 1e3
            b = results["numba"][k] * 1e3
            print(f"{k:<16}{a:>12.2f}{b:>12.2f}{a / b:>9.2f}")


if __name__ == "__main__":
    main()
