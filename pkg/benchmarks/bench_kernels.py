"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from o1kepler import _kernels_py, fock

try:
    from o1kepler import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def cases():
    x = np.linspace(0.0, 60.0, 200_000)
    nodes = np.linspace(0.5, 40.0, 16)  # quadrature-sized input
    basis = fock.build_basis(4, 14)
    states = basis.states
    sample = [nu for nu in states[:: max(1, len(states) // 2000)]]
    return [
        ("laguerre_values a=1.5 n=30, 2e5 pts", lambda k: k.laguerre_values(1.5, 30, x)),
        ("laguerre_values n=10, 16 pts x2000 calls",
         lambda k: [k.laguerre_values(0.5, 10, nodes) for _ in range(2000)]),
        (f"fock_lower_entries n=4 Nmax=14 ({len(states)} states)", lambda k: k.fock_lower_entries(states, 2)),
        (f"fock_rank x{len(sample)}", lambda k: [k.fock_rank(nu, 4) for nu in sample]),
    ]


def best_of(fn, kernels, repeat):
    return min(timeit.repeat(lambda: fn(kernels), number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    print(f"{'kernel':<48} {'python [ms]':>12} {'cython [ms]':>12} {'speedup':>8}")
    for name, fn in cases():
        py = best_of(fn, _kernels_py, args.repeat) * 1e3
        if _ckernels is None:
            print(f"{name:<48} {py:12.2f} {'n/a':>12} {'':>8}")
            continue
        cy = best_of(fn, _ckernels, args.repeat) * 1e3
        print(f"{name:<48} {py:12.2f} {cy:12.2f} {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
