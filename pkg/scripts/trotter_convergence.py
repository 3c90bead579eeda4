"""Error of the group-commutator product against exp(t [X1, X2]) as the step count grows.

Both step conventions are reported.  The ``literal`` one takes steps of
t/sqrt(n) and settles on exp(-t^2 [X1, X2]), so its error stalls.

Usage: python3 scripts/trotter_convergence.py [--dim 3] [--t 0.5] [--seed 0]
"""
import argparse

import numpy as np

from qlie.simulator import trotter_commutator_error


def random_skew(n, rng):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a - a.conj().T) / 2


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=3)
    ap.add_argument("--t", type=float, default=0.5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    x1, x2 = random_skew(args.dim, rng), random_skew(args.dim, rng)
    print(f"{'steps':>6} {'convergent':>12} {'literal':>12}")
    for k in range(0, 14, 2):
        steps = 2**k
        conv = trotter_commutator_error(x1, x2, args.t, steps)
        lit = trotter_commutator_error(x1, x2, args.t, steps, form="literal")
        print(f"{steps:>6} {conv:>12.3e} {lit:>12.3e}")


if __name__ == "__main__":
    main()
