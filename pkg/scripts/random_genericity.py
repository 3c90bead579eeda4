"""Fraction of random dense systems judged controllable, per (n, L).

Usage: python3 scripts/random_genericity.py [--trials 50]
"""
import argparse
from collections import Counter

from qlie.criteria import analyze
from qlie.models import random_dense


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=50)
    args = ap.parse_args()
    print(f"{'n':>3} {'L':>3} {'density':>8} {'wavefn':>7} {'lie_dim values':>16}")
    for n in (2, 3, 4):
        for L in (1, 2, 3):
            dens = wave = 0
            dims = Counter()
            for seed in range(args.trials):
                r = analyze(random_dense(n, L, seed=seed))
                dens += r.density_controllable
                wave += r.wavefunction_controllable
                dims[r.lie_dim] += 1
            print(f"{n:>3} {L:>3} {dens / args.trials:>8.2f} {wave / args.trials:>7.2f} {dict(dims)!s:>16}")


if __name__ == "__main__":
    main()
