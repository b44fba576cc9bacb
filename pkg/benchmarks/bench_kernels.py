#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the three hot operations on optimizer-sized problems, then a short
end-to-end ascent with each backend.  Run from the repo root:

    python benchmarks/bench_kernels.py [--repeats 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from chancap import depolarizing, tensor_channels
from chancap._kernels import _pykernels
from chancap.optimize import OptimizerConfig, _run_restart

try:
    from chancap._kernels import _cykernels
except ImportError:
    _cykernels = None


def bench(fn, args, repeats: int, inner: int) -> float:
    """Best-of-repeats time per call, in microseconds."""
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(inner):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / inner)
    return best * 1e6


def kernel_cases():
    rng = np.random.default_rng(0)
    qubit = depolarizing(2, 0.5).stack
    two_use = tensor_channels([depolarizing(2, 0.5)] * 2).stack
    rho4 = np.eye(4, dtype=complex) / 4
    psi4 = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi4 /= np.linalg.norm(psi4)
    psis = rng.normal(size=(16, 4)) + 1j * rng.normal(size=(16, 4))
    psis /= np.linalg.norm(psis, axis=1, keepdims=True)
    probs = np.full(16, 1 / 16)
    return [
        ("entropy_psd 4x4", "entropy_psd", (rho4,), 2000),
        ("apply_kraus_pure 16-term", "apply_kraus_pure", (two_use, psi4), 2000),
        ("apply_kraus_dm 16-term", "apply_kraus_dm", (two_use, rho4), 1000),
        ("chi_pure_ensemble m=16", "chi_pure_ensemble", (two_use, psis, probs), 200),
        ("chi_pure_ensemble m=4 qubit", "chi_pure_ensemble",
         (qubit, psis[:4, :2] / np.linalg.norm(psis[:4, :2], axis=1, keepdims=True),
          np.full(4, 0.25)), 500),
    ]


def bench_ascent(backend_mod, repeats: int) -> float:
    """Seconds for a fixed 200-sweep two-use ascent using one backend."""
    import chancap.optimize as opt

    saved = (opt.apply_kraus_pure, opt.entropy_psd)
    opt.apply_kraus_pure = backend_mod.apply_kraus_pure
    opt.entropy_psd = backend_mod.entropy_psd
    try:
        stack = tensor_channels([depolarizing(2, 0.5)] * 2).stack
        cfg = OptimizerConfig(iters=200, patience=10**9, seed=1)
        best = float("inf")
        for _ in range(repeats):
            rng = np.random.Generator(np.random.PCG64(12345))
            t0 = time.perf_counter()
            _run_restart([stack], "mean", 4, 16, cfg, rng, structured=False)
            best = min(best, time.perf_counter() - t0)
        return best
    finally:
        opt.apply_kraus_pure, opt.entropy_psd = saved


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if _cykernels is None:
        print("compiled kernels not built; showing numpy fallback only")
    backends = [("python", _pykernels)]
    if _cykernels is not None:
        backends.append(("cython", _cykernels))

    print(f"{'kernel':<30} " + " ".join(f"{name + ' (us)':>14}" for name, _ in backends)
          + ("        speedup" if _cykernels else ""))
    for label, attr, call_args, inner in kernel_cases():
        times = [bench(getattr(mod, attr), call_args, args.repeats, inner) for _, mod in backends]
        row = f"{label:<30} " + " ".join(f"{t:>14.2f}" for t in times)
        if len(times) == 2:
            row += f"        {times[0] / times[1]:>6.1f}x"
        print(row)

    print()
    print("end-to-end: 200-sweep two-use ascent (m=16, dim 4)")
    times = []
    for name, mod in backends:
        secs = bench_ascent(mod, max(1, args.repeats // 2))
        times.append(secs)
        print(f"  {name:<8} {secs * 1e3:>10.1f} ms")
    if len(times) == 2:
        print(f"  speedup  {times[0] / times[1]:>9.1f}x")


if __name__ == "__main__":
    main()
