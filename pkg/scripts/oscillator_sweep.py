"""Controllability of the truncated harmonic oscillator as the truncation grows.

Usage: python3 scripts/oscillator_sweep.py [--max-n 8]
"""
import argparse
import time

from qlie.criteria import analyze
from qlie.models import truncated_oscillator


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=8)
    args = ap.parse_args()
    print(f"{'n':>3} {'lie_dim':>8} {'n^2':>5} {'centralizer':>12} {'density':>8} {'wavefn':>7} {'seconds':>8}")
    for n in range(2, args.max_n + 1):
        t0 = time.perf_counter()
        r = analyze(truncated_oscillator(n))
        dt = time.perf_counter() - t0
        print(
            f"{n:>3} {r.lie_dim:>8} {n * n:>5} {r.centralizer_dim:>12} "
            f"{str(r.density_controllable):>8} {str(r.wavefunction_controllable):>7} {dt:>8.3f}"
        )


if __name__ == "__main__":
    main()
