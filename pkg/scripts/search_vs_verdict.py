"""Compare the algebraic verdict with what a random pulse search actually reaches.

Usage: python3 scripts/search_vs_verdict.py [--budget 5000]
"""
import argparse

import numpy as np

from qlie import models
from qlie.criteria import analyze
from qlie.simulator import reachability_search


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--budget", type=int, default=5000)
    args = ap.parse_args()
    cases = {
        "spin_half": models.spin_half(),
        "oscillator n=3": models.truncated_oscillator(3),
        "diagonal n=3": models.diagonal_pair(3),
        "random n=3 L=2": models.random_dense(3, 2, seed=0),
    }
    for name, sys_ in cases.items():
        r = analyze(sys_)
        target = np.zeros(sys_.n)
        target[-1] = 1.0
        res = reachability_search(sys_, target, budget=args.budget, seed=0)
        print(f"{name:>16}: wavefunction={r.wavefunction_controllable!s:>5}  e1->e_n fidelity={res.best_fidelity:.4f}")


if __name__ == "__main__":
    main()
