"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--pulses N] [--repeat R]
"""
import argparse
import timeit

import numpy as np

from fourthorder import _pykernels, kernels
from fourthorder.fock import canonical_pairs
from fourthorder.interference import output_probabilities


def tally_inputs(n, rng):
    cum_pair = np.cumsum(output_probabilities(1.0, 1.0))
    cum_pair[-1] = 1.0
    return (rng.random(n), rng.random(n), rng.random((n, 4)), 0.05, 0.1,
            np.array([0.25, 0.5, 0.75, 1.0]), cum_pair, np.array(canonical_pairs(4)), 1e-4)


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pulses", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if kernels.BACKEND != "cython":
        print("compiled extension not available; only the Python kernel is timed")
    rng = np.random.default_rng(0)
    targs = tally_inputs(args.pulses, rng)
    U = np.linalg.qr(rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8)))[0]
    pairs = np.array(canonical_pairs(8))

    rows = [("tally_pulses", f"{args.pulses} pulses",
             lambda mod: (lambda: mod.tally_pulses(*targs))),
            ("two_photon_coefficients", "M=8",
             lambda mod: (lambda: mod.two_photon_coefficients(U, pairs)))]
    print(f"{'kernel':<26}{'size':<18}{'python [s]':>12}{'compiled [s]':>14}{'speedup':>10}")
    for name, size, make in rows:
        slow = best_of(make(_pykernels), args.repeat)
        if kernels.BACKEND == "cython":
            fast = best_of(make(kernels), args.repeat)
            print(f"{name:<26}{size:<18}{slow:>12.4f}{fast:>14.4f}{slow / fast:>10.1f}")
        else:
            print(f"{name:<26}{size:<18}{slow:>12.4f}{'-':>14}{'-':>10}")


if __name__ == "__main__":
    main()
