"""Density and CDF of S_1 for rational alpha by inverting the Mellin transform.

Along Re(s) = 1, conjugate symmetry of M gives

    p(x) = 1/(pi x) Re int_0^inf M(1 + iu) exp(-iu ln x) du,

and on a shifted line Re(s) = c < 1 (inside the strip where M is finite)

    F(x) = P(S_1 <= x) = x^(1-c)/pi Re int_0^inf M(c + iu)/(1 - c - iu) exp(-iu ln x) du.

M decays exponentially in u, so the integrals are truncated at u_max and
evaluated with Filon's rule.  M is sampled once on the u-grid and the
samples are reused for every x.
"""

from __future__ import annotations

import numpy as np
from mpmath import mp

from .errors import DomainError, RationalAlphaError
from .exact import default_dps, to_mpf
from .mellin import mellin_batch
from .params import StableParams
from .quadrature import QuadConfig, filon_checked
from .series import DensityCurve, coeff_a, coeff_b

__all__ = ["QuadConfig", "mellin_samples", "invert_mellin", "cdf_mellin", "cdf", "survival_shift",
           "mass_check", "default_grid", "head_mass", "tail_mass"]


# imaginary part used for the u = 0 sample on a shifted contour
_U0 = 1e-20


def default_grid(n: int = 300, x_min: float = 0.05, x_max: float = 6.0) -> np.ndarray:
    return np.linspace(x_min, x_max, n)


def mellin_samples(params: StableParams, cfg: QuadConfig | None = None, c: float = 1.0,
                   dps: int | None = None):
    """(u, M(c + iu)) on the Filon grid as float arrays.

    On the line c = 1 the u = 0 sample is the exact value M(1) = 1; on a
    shifted line it is taken at u = 1e-20.
    """
    cfg = cfg or QuadConfig()
    if params.alpha_rational is None:
        raise DomainError("Mellin inversion needs exactly rational alpha")
    u = cfg.u_grid()
    pts = [mp.mpf(c) + 1j * mp.mpf(x) for x in u[1:]]
    head = 1.0 + 0j if c == 1.0 else complex(mellin_batch(params, [c + 1j * _U0], dps)[0])
    vals = [head] + [complex(v) for v in mellin_batch(params, pts, dps)]
    return u, np.array(vals, dtype=complex)


def _prepare_xs(xs):
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(xs <= 0):
        raise DomainError("x must be positive")
    return xs


def invert_mellin(params: StableParams, xs=None, cfg: QuadConfig | None = None,
                  samples=None) -> DensityCurve:
    """Density of S_1 on ``xs`` (default: 300 points on [0.05, 6])."""
    cfg = cfg or QuadConfig()
    xs = _prepare_xs(default_grid() if xs is None else xs)
    u, f = samples if samples is not None else mellin_samples(params, cfg)
    scale = 1 / (np.pi * xs)
    integral, err = filon_checked(f, cfg.step, np.log(xs), cfg.refinement_tolerance, scale)
    ps = integral.real * scale
    return DensityCurve(xs=xs, ps=ps, method="mellin_inversion", params=params,
                        truncation=cfg.to_dict(),
                        diagnostics={"error": err, "tail_at_u_max": float(abs(f[-1]))})


def cdf_mellin(params: StableParams, xs, cfg: QuadConfig | None = None, c: float | None = None,
               samples=None) -> np.ndarray:
    """P(S_1 <= x) from a single contour Re(s) = c (default cfg.contour_shift).

    For 1 - alpha rho < c < 1 the contour gives F(x) directly; for
    1 < c < 1 + alpha it gives the survival function and 1 - S(x) is
    returned.  The factor x^(1-c) damps the quadrature error at large x
    when c > 1 and at small x when c < 1.
    """
    cfg = cfg or QuadConfig()
    c = cfg.contour_shift if c is None else c
    lo = 1 - float(params.alpha * params.rho)
    hi = 1 + float(params.alpha)
    if not (lo < c < 1 or 1 < c < hi):
        raise DomainError(f"contour shift c={c} must lie in ({lo}, 1) or (1, {hi})")
    xs = _prepare_xs(xs)
    u, f = samples if samples is not None else mellin_samples(params, cfg, c=c)
    scale = xs ** (1 - c) / np.pi
    if c < 1:
        g = f / (1 - c - 1j * u)
        integral, _ = filon_checked(g, cfg.step, np.log(xs), cfg.refinement_tolerance, scale)
        return integral.real * scale
    g = f / (c - 1 + 1j * u)
    integral, _ = filon_checked(g, cfg.step, np.log(xs), cfg.refinement_tolerance, scale)
    return 1 - integral.real * scale


def survival_shift(params: StableParams) -> float:
    """Contour used for x >= 1: halfway into the strip 1 < c < 1 + alpha."""
    return 1 + float(params.alpha) / 2


def cdf(params: StableParams, xs, cfg: QuadConfig | None = None, samples_lo=None,
        samples_hi=None) -> np.ndarray:
    """P(S_1 <= x): contour left of 1 for x < 1, right of 1 for x >= 1."""
    cfg = cfg or QuadConfig()
    xs = _prepare_xs(xs)
    out = np.empty_like(xs)
    low = xs < 1
    if low.any():
        out[low] = cdf_mellin(params, xs[low], cfg, samples=samples_lo)
    if (~low).any():
        out[~low] = cdf_mellin(params, xs[~low], cfg, c=survival_shift(params),
                               samples=samples_hi)
    return out


# mass check ------------------------------------------------------------------

def _safe(fn, *args):
    try:
        return fn(*args)
    except RationalAlphaError:
        return None


def head_mass(params: StableParams, x0, max_m: int = 4, max_n: int = 4):
    """int_0^x0 p from the leading terms of the expansion at 0 (alpha > 1).

    Terms whose coefficient is undefined at rational alpha are skipped;
    the remainder is of the order of the first skipped power.
    """
    alpha, rho = to_mpf(params.alpha), to_mpf(params.rho)
    x0 = mp.mpf(x0)
    total = mp.mpf(0)
    for m in range(max_m + 1):
        for n in range(max_n + 1):
            a = _safe(coeff_a, params, m, n)
            if a is None:
                break
            e = alpha * rho + m + alpha * n
            total += a * x0 ** e / e
    return total


def tail_mass(params: StableParams, x1, max_m: int = 4, max_n: int = 4):
    """int_x1^inf p from the leading terms of the expansion at infinity."""
    alpha = to_mpf(params.alpha)
    x1 = mp.mpf(x1)
    total = mp.mpf(0)
    for m in range(max_m + 1):
        for n in range(1, max_n + 1):
            b = _safe(coeff_b, params, m, n)
            if b is None:
                break
            e = alpha * n + m
            total += b * x1 ** (-e) / e
    return total


def mass_check(params: StableParams, cfg: QuadConfig | None = None, x_lo: float = 0.05,
               x_hi: float = 100.0, n_points: int = 4001, samples=None):
    """Total mass: series head on (0, x_lo) + inverted density on (x_lo, x_hi) + tail.

    The middle part uses Simpson's rule in log x.  Returns a dict with the
    three pieces and the total.
    """
    if params.alpha < 1:
        raise DomainError("mass_check implements the alpha in (1, 2) head/tail expansions")
    cfg = cfg or QuadConfig()
    samples = samples if samples is not None else mellin_samples(params, cfg)
    t = np.linspace(np.log(x_lo), np.log(x_hi), n_points | 1)
    xs = np.exp(t)
    curve = invert_mellin(params, xs, cfg, samples)
    from scipy.integrate import simpson
    middle = float(simpson(curve.ps * xs, x=t))
    with mp.workdps(default_dps()):
        head = float(head_mass(params, x_lo))
        tail = float(tail_mass(params, x_hi))
    return {"head": head, "middle": middle, "tail": tail, "total": head + middle + tail,
            "min_density": float(curve.ps.min())}
