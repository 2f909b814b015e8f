"""Walk through the divergence witness level by level.

Builds x = [0; a1, a2, a3] with a_{n+1} = ceil(2^(q_n ln(q_n)^1.1)) + 1,
maps it into (1, 2) as alpha = 2 - x, and prints the rigorous lower bound
for |a_{0,q}| at each convergent denominator q of alpha (rho = 3/5, x = 1).
Bounds below 1 (ln < 0) at small q are expected; the last level exceeds 1.
"""

import argparse

from mpmath import mp

from stable_extrema import diophantine as dio


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rho", default="3/5")
    ap.add_argument("--levels", type=int, default=3)
    args = ap.parse_args()

    x = dio.construct_L_tilde(2, "0.1", args.levels)
    print("x      =", x)
    verdict = dio.test_L_tilde(x, 2, 0.1)
    print("L~ test:", verdict.verdict, [w["n"] for w in verdict.witness or []])
    alpha = x.reflect(2)
    print("alpha  =", alpha)
    for level in range(1, alpha.depth + 1):
        w = dio.divergence_witness(alpha, args.rho, level=level)
        print(f"  level {level}: q = {w.q:>10d}  ln bound = {mp.nstr(w.log_lower_bound, 10):>16}"
              f"  bound = {w.decimal(6)}  exceeds 1: {w.exceeds_one}")
    # the 1 + x map collapses at the last level for rho = 3/5 (5 divides p_3)
    s = dio.divergence_witness(x.shift(1), args.rho)
    print(f"shift 1 + x at q = {s.q}: ln bound = {mp.nstr(s.log_lower_bound, 6)}")


if __name__ == "__main__":
    main()
