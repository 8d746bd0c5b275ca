"""Benchmark the compiled master-equation kernel against the numpy fallback.

Times RK4 stepping on the robustness-sized problem (joint qubit x resonator,
thermal initial state, bath dissipators on) and reports steps/s for each
importable backend plus the max elementwise deviation between their results.

    python benchmarks/bench_kernels.py [--n-max 250] [--steps 40] [--repeats 3]
"""

import argparse
import time

import numpy as np
import scipy.sparse as sp

from mrcool import core, jc, kernels, opensys


def build_problem(n_max: int):
    nbar = 7.84
    params = jc.SystemParams(delta=1.0, g=0.04, n_max=n_max)
    pol = core.TruncationPolicy(n_max=n_max, tail_tolerance=1.0 - 1e-9)
    rho_m = core.thermal_density_matrix(min(nbar, n_max / 4), pol)
    joint = opensys.embed_ground(rho_m)
    h = sp.csr_matrix(jc.build_jc_hamiltonian(params))
    args = (
        h.data.astype(complex),
        h.indices.astype(np.int64),
        h.indptr.astype(np.int64),
        n_max + 1,
        1e-5 * (nbar + 1.0),
        1e-5 * nbar,
        0.0,
        0.0,
        0.05,
    )
    return joint, args


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=250)
    ap.add_argument("--steps", type=int, default=40)
    ap.add_argument("--repeats", type=int, default=3)
    opts = ap.parse_args()

    joint, args = build_problem(opts.n_max)
    backends = kernels.available_backends()
    print(f"problem: joint dim {2 * (opts.n_max + 1)}, {opts.steps} RK4 steps, best of {opts.repeats}")
    results = {}
    timings = {}
    for name, mod in backends.items():
        best = np.inf
        for _ in range(opts.repeats):
            t0 = time.perf_counter()
            out = mod.rk4_evolve(joint, *args, opts.steps)
            best = min(best, time.perf_counter() - t0)
        results[name] = out
        timings[name] = best
        print(f"  {name:>6}: {best:8.3f} s  ({opts.steps / best:8.1f} steps/s)")
    if len(results) == 2:
        dev = np.max(np.abs(results["numpy"] - results["cython"]))
        speedup = timings["numpy"] / timings["cython"]
        print(f"  speedup (numpy/cython): {speedup:.2f}x, max |difference|: {dev:.3e}")


if __name__ == "__main__":
    main()
