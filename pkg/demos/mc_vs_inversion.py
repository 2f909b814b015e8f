"""Compare a quick Monte Carlo sample of S_1 with the inverted CDF.

    python demos/mc_vs_inversion.py --paths 20000 --steps 2000

The grid only sees the process at times k/steps, so the simulated maximum
is biased low; the Kolmogorov distance shrinks slowly as --steps grows.
"""

import argparse

import numpy as np

from stable_extrema.oracle_mc import McConfig, grid_cdf, ks_distance, sample_sup
from stable_extrema.params import StableParams


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--paths", type=int, default=20_000)
    ap.add_argument("--steps", type=int, nargs="+", default=[100, 1000])
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    params = StableParams("3/2", "3/5")
    F = grid_cdf(params)
    qs = np.array([0.25, 0.5, 1.0, 2.0, 4.0])
    print("x     " + "".join(f"{q:>9.2f}" for q in qs))
    print("exact " + "".join(f"{v:>9.4f}" for v in F(qs)))
    for steps in args.steps:
        cfg = McConfig(paths=args.paths, grid_steps=steps, seed=args.seed, workers=args.workers)
        s = sample_sup(params, cfg)
        emp = np.searchsorted(s, qs, side="right") / len(s)
        print(f"{steps:<6d}" + "".join(f"{v:>9.4f}" for v in emp)
              + f"   KS = {ks_distance(s, F):.4f}")


if __name__ == "__main__":
    main()
