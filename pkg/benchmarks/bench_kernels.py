#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Usage: python benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from nlsearch.kernels import BACKEND, get_backend


def time_call(fn, *args, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def random_state(rng, n_qubits):
    amps = rng.normal(size=2**n_qubits) + 1j * rng.normal(size=2**n_qubits)
    return np.ascontiguousarray(amps / np.linalg.norm(amps))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if BACKEND != "cython":
        print("compiled backend not available; nothing to compare")
        return

    py = get_backend("python")
    cy = get_backend("cython")
    rng = np.random.default_rng(42)
    gate = np.ascontiguousarray(np.array([[1, -1], [1, 1]]) / np.sqrt(2), dtype=complex)

    print(f"{'kernel':<34} {'python':>10} {'cython':>10} {'speedup':>8}")
    for n_qubits in (6, 11, 16):
        amps = random_state(rng, n_qubits)

        def sweep(backend, amps=amps, n_qubits=n_qubits):
            out = amps
            for bit in range(n_qubits):
                out = backend.apply_gate(out, gate, bit)
            return out

        t_py = time_call(sweep, py, repeats=args.repeats)
        t_cy = time_call(sweep, cy, repeats=args.repeats)
        label = f"apply_gate sweep, {n_qubits} qubits"
        print(f"{label:<34} {t_py * 1e3:>8.2f}ms {t_cy * 1e3:>8.2f}ms {t_py / t_cy:>7.1f}x")

    for n_qubits, steps in ((4, 1000), (9, 1000), (9, 6283)):
        amps = random_state(rng, n_qubits)
        bench_args = (amps, 0.01, 1.0, 512.0, 1e-3, steps)
        t_py = time_call(py.rk4_nonlinear, *bench_args, repeats=args.repeats)
        t_cy = time_call(cy.rk4_nonlinear, *bench_args, repeats=args.repeats)
        label = f"rk4, {n_qubits} qubits, {steps} steps"
        print(f"{label:<34} {t_py * 1e3:>8.2f}ms {t_cy * 1e3:>8.2f}ms {t_py / t_cy:>7.1f}x")


if __name__ == "__main__":
    main()
