"""Monte-Carlo oracle for X_1, S_1 and S_e(1).

Stable variates come from the Chambers-Mallows-Stuck construction.  With
V ~ U(-pi/2, pi/2), W ~ Exp(1) and theta = pi alpha (rho - 1/2),

    X = sin(alpha V + theta) / cos(V)^(1/alpha) * (cos((1-alpha) V - theta) / W)^((1-alpha)/alpha)

has characteristic exponent |u|^alpha exp(-i theta sign u), i.e. exactly
the normalised law with P(X > 0) = rho.  (Here theta = arctan(beta
tan(pi alpha/2)) and the scale factor (1 + beta^2 tan^2)^(1/(2 alpha))
cancels the normalisation c.)

The supremum is approximated by the maximum of the random walk on a
uniform time grid, including time 0.  This is biased low: the walk
misses excursions between grid points, and the bias decays only like
grid_steps^(-1/alpha) times a slowly varying factor.  Nothing is done
about it; callers use loose tolerances.

Reproducibility: paths are processed in fixed-size chunks and chunk k
always uses the k-th child of SeedSequence(seed), so results do not
depend on the number of workers.  Outputs are sorted.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError
from .params import StableParams

# number of paths handled by one RNG stream / work unit
CHUNK_PATHS = 250
# cap on floats held per block while simulating one chunk
_BLOCK_FLOATS = 4_000_000


@dataclass(frozen=True)
class McConfig:
    paths: int = 100_000
    grid_steps: int = 10_000
    seed: int = 20240611
    antithetic: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.paths < 1:
            raise DomainError("paths must be >= 1")
        if self.grid_steps < 2:
            raise DomainError("grid_steps must be >= 2")
        if self.workers < 1:
            raise DomainError("workers must be >= 1")
        if self.antithetic and self.paths % 2:
            raise DomainError("antithetic sampling needs an even number of paths")

    def to_dict(self) -> dict:
        return asdict(self)


def _theta(params: StableParams) -> float:
    return math.pi * float(params.alpha) * (float(params.rho) - 0.5)


def _cms(alpha: float, theta: float, v: np.ndarray, w: np.ndarray) -> np.ndarray:
    a1 = (1 - alpha) / alpha
    out = np.sin(alpha * v + theta)
    out *= np.exp(a1 * (np.log(np.cos((1 - alpha) * v - theta)) - np.log(w))
                  - np.log(np.cos(v)) / alpha)
    return out


def _draw(rng: np.random.Generator, alpha: float, theta: float, size, antithetic=False):
    """CMS variates; with ``antithetic`` the second half uses -V (same law)."""
    if antithetic:
        half = (size[0] // 2,) + tuple(size[1:])
        v = rng.uniform(-math.pi / 2, math.pi / 2, half)
        w = rng.standard_exponential(half)
        return np.concatenate([_cms(alpha, theta, v, w), _cms(alpha, theta, -v, w)])
    v = rng.uniform(-math.pi / 2, math.pi / 2, size)
    w = rng.standard_exponential(size)
    return _cms(alpha, theta, v, w)


def _streams(seed: int, n_chunks: int):
    return np.random.SeedSequence(seed).spawn(n_chunks)


def sample_stable(params: StableParams, n: int, seed: int = 0) -> np.ndarray:
    """n i.i.d. copies of X_1 (sorted)."""
    alpha, theta = float(params.alpha), _theta(params)
    n_chunks = max(1, math.ceil(n / 1_000_000))
    parts = []
    for k, ss in enumerate(_streams(seed, n_chunks)):
        size = min(1_000_000, n - k * 1_000_000)
        parts.append(_draw(np.random.default_rng(ss), alpha, theta, (size,)))
    return np.sort(np.concatenate(parts))


def _sup_chunk(args):
    alpha, theta, n_paths, steps, t, seed_seq, antithetic, exp_time = args
    rng = np.random.default_rng(seed_seq)
    horizon = rng.standard_exponential(n_paths) if exp_time else np.full(n_paths, float(t))
    if antithetic:
        horizon[n_paths // 2:] = horizon[:n_paths // 2]
    dt_scale = (horizon / steps) ** (1 / alpha)
    level = np.zeros(n_paths)
    sup = np.zeros(n_paths)  # time 0 is on the grid
    block = max(1, min(steps, _BLOCK_FLOATS // n_paths))
    done = 0
    while done < steps:
        k = min(block, steps - done)
        inc = _draw(rng, alpha, theta, (n_paths, k), antithetic) * dt_scale[:, None]
        path = np.cumsum(inc, axis=1)
        path += level[:, None]
        np.maximum(sup, path.max(axis=1), out=sup)
        level = path[:, -1]
        done += k
    return sup


def _run(params: StableParams, cfg: McConfig, t: float, exp_time: bool) -> np.ndarray:
    alpha, theta = float(params.alpha), _theta(params)
    n_chunks = math.ceil(cfg.paths / CHUNK_PATHS)
    jobs = []
    for k, ss in enumerate(_streams(cfg.seed, n_chunks)):
        n_paths = min(CHUNK_PATHS, cfg.paths - k * CHUNK_PATHS)
        anti = cfg.antithetic and n_paths % 2 == 0
        jobs.append((alpha, theta, n_paths, cfg.grid_steps, t, ss, anti, exp_time))
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            parts = list(pool.map(_sup_chunk, jobs))
    else:
        parts = [_sup_chunk(j) for j in jobs]
    return np.sort(np.concatenate(parts))


def sample_sup(params: StableParams, cfg: McConfig | None = None, t: float = 1.0) -> np.ndarray:
    """Discretised S_t for cfg.paths paths (sorted, all >= 0)."""
    if not t > 0:
        raise DomainError("t must be positive")
    return _run(params, cfg or McConfig(), t, exp_time=False)


def sample_sup_exp_time(params: StableParams, cfg: McConfig | None = None) -> np.ndarray:
    """Discretised S_T with an independent T ~ Exp(1) per path (sorted)."""
    return _run(params, cfg or McConfig(), 1.0, exp_time=True)


# estimators -------------------------------------------------------------------

def mean_se(values) -> tuple[float, float]:
    values = np.asarray(values, dtype=float)
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(len(values)))


def positivity(samples) -> tuple[float, float]:
    """Empirical P(X > 0) and its standard error."""
    frac = float(np.mean(np.asarray(samples) > 0))
    return frac, math.sqrt(max(frac * (1 - frac), 1e-300) / len(samples))


def phi_estimate(samples, z) -> tuple[np.ndarray, np.ndarray]:
    """E[exp(-z S)] and its standard error for each z (z = 0 gives exactly 1, 0)."""
    s = np.asarray(samples, dtype=float)
    z = np.atleast_1d(np.asarray(z, dtype=float))
    est, se = np.empty_like(z), np.empty_like(z)
    for i, zi in enumerate(z):
        if zi == 0:
            est[i], se[i] = 1.0, 0.0
        else:
            est[i], se[i] = mean_se(np.exp(-zi * s))
    return est, se


def ks_distance(sorted_samples, cdf) -> float:
    """sup_x |F_n(x) - F(x)| for a continuous reference CDF (callable on arrays).

    Atoms of the sample (the discretised supremum has one at 0) are handled
    by comparing with F at both sides of each jump.
    """
    s = np.sort(np.asarray(sorted_samples, dtype=float))
    n = len(s)
    F = np.asarray(cdf(s), dtype=float)
    # distinct values: F_n jumps from (first index)/n to (last index + 1)/n
    uniq, first = np.unique(s, return_index=True)
    last = np.append(first[1:], n)
    Fu = F[first]
    return float(max(np.max(np.abs(last / n - Fu)), np.max(np.abs(Fu - first / n))))


def ks_two_sample(a, b) -> tuple[float, float]:
    from scipy.stats import ks_2samp
    res = ks_2samp(a, b)
    return float(res.statistic), float(res.pvalue)


def grid_cdf(params: StableParams, x_min: float = 1e-3, x_max: float = 1e4, n: int = 4001,
             quad_cfg=None):
    """Callable CDF of S_1 from Mellin inversion, interpolated in log x.

    Below x_min the small-x behaviour F ~ C x^(alpha rho) is used, above
    x_max the value is clipped to the last grid value.
    """
    from .inversion import cdf as inversion_cdf
    xg = np.geomspace(x_min, x_max, n)
    Fg = np.clip(inversion_cdf(params, xg, quad_cfg), 0.0, 1.0)
    arho = float(params.alpha * params.rho)

    def F(x):
        x = np.asarray(x, dtype=float)
        out = np.interp(np.log(np.maximum(x, x_min)), np.log(xg), Fg)
        small = x < x_min
        out[small] = Fg[0] * (np.maximum(x[small], 0) / x_min) ** arho
        return out

    return F
