"""Mellin transform M(s) = E[S_1**(s-1)] of the supremum for rational alpha.

For alpha = m/n (coprime) and Im(s) > 0,

    M(s) = sqrt(n/m) exp(pi i (m^2+n^2-3mn)/(12mn) + pi i (n/m - rho)(s-1))
           * Gamma(s) / Gamma(1 - (n/m)(1-s))
           * H(m rho) H(n s) / H(n(s-1) + m rho),

with H = H_{m,n} from :mod:`stable_extrema.specfun`.  The argument m*rho
is real, so it is evaluated at m*rho + i*eps_H; real-axis values M(sigma)
are obtained by Richardson extrapolation in the imaginary part.

The module also hosts an independent oracle: the Darling integral for the
Wiener-Hopf factor phi(z) = E[exp(-z S_e)] (e ~ Exp(1)) and the scaling
identity

    int_0^inf z^(w-1) phi(z) dz = Gamma(w) Gamma(1 - w/alpha) M(1 - w).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp

from .errors import DomainError, QuadratureError
from .exact import default_dps, frac_to_mpf, to_mpf
from .params import StableParams
from .quadrature import QuadConfig
from .specfun import log_h_mn

CLOSED_FORM = "closed_form_rational"
ORACLE = "oracle_quadrature"

# imaginary lift of the real H argument m*rho (34 digits + guard)
EPS_H = mp.mpf("1e-25")
GUARD_DIGITS = 25
RICHARDSON_EPS = (1e-4, 5e-5, 2.5e-5)


@dataclass(frozen=True)
class MellinValue:
    s: object
    value: object
    params: StableParams
    method: str = CLOSED_FORM

    def __complex__(self):
        return complex(self.value)


def _rational(params: StableParams):
    mn = params.alpha_rational
    if mn is None:
        raise DomainError(f"closed-form Mellin transform needs exactly rational alpha, "
                          f"got {params.alpha}")
    return mn


def _log_mellin(m: int, n: int, rho, s, log_h_rho=None):
    """ln M(s) at the current precision; ``rho`` is already an mpf."""
    if log_h_rho is None:
        log_h_rho = log_h_mn(m, n, m * rho + 1j * EPS_H)
    log_h_ns = log_h_mn(m, n, n * s)
    log_h_shift = log_h_mn(m, n, n * (s - 1) + m * rho + 1j * EPS_H)
    r = mp.mpf(n) / m
    phase = (1j * mp.pi * (m * m + n * n - 3 * m * n) / (12 * m * n)
             + 1j * mp.pi * (r - rho) * (s - 1))
    g = mp.loggamma(s) - mp.loggamma(1 - r * (1 - s))
    return mp.log(r) / 2 + phase + g + log_h_rho + log_h_ns - log_h_shift


def mellin_rational(params: StableParams, s, dps: int | None = None) -> MellinValue:
    """Closed-form M(s) for alpha = m/n, Im(s) > 0.

    >>> p = StableParams("3/2", "3/5")
    >>> v = mellin_rational(p, 1 + 1e-8j).value
    >>> abs(v - 1) < 1e-6
    True
    """
    m, n = _rational(params)
    dps = dps or default_dps()
    with mp.workdps(dps + GUARD_DIGITS):
        s_ = mp.mpc(s)
        if s_.imag <= 0:
            raise DomainError(f"closed form needs Im(s) > 0, got s={s}")
        rho = to_mpf(params.rho)
        value = mp.exp(_log_mellin(m, n, rho, s_))
    with mp.workdps(dps):
        return MellinValue(s=+s_, value=+value, params=params)


def mellin_batch(params: StableParams, s_values, dps: int | None = None) -> list:
    """M(s) for many s (all with Im(s) > 0), sharing the s-independent factor."""
    m, n = _rational(params)
    dps = dps or default_dps()
    out = []
    with mp.workdps(dps + GUARD_DIGITS):
        rho = to_mpf(params.rho)
        log_h_rho = log_h_mn(m, n, m * rho + 1j * EPS_H)
        for s in s_values:
            s_ = mp.mpc(s)
            if s_.imag <= 0:
                raise DomainError(f"closed form needs Im(s) > 0, got s={s}")
            out.append(mp.exp(_log_mellin(m, n, rho, s_, log_h_rho)))
    with mp.workdps(dps):
        return [+v for v in out]


def richardson_zero(eps, values):
    """Polynomial extrapolation of values(eps) to eps = 0 (Lagrange form)."""
    eps = [mp.mpf(e) for e in eps]
    total = mp.mpc(0)
    for i, (ei, vi) in enumerate(zip(eps, values)):
        w = mp.mpf(1)
        for j, ej in enumerate(eps):
            if j != i:
                w *= ej / (ej - ei)
        total += w * vi
    return total


def mellin_real(params: StableParams, sigma, eps=RICHARDSON_EPS, dps: int | None = None):
    """M(sigma) on the real axis as the limit of M(sigma + i eps), eps -> 0.

    Returns the extrapolated complex value; its imaginary part measures the
    extrapolation error (the exact limit is real).
    """
    values = [mellin_rational(params, mp.mpf(sigma) + 1j * mp.mpf(e), dps=dps).value
              for e in eps]
    return richardson_zero(eps, values)


# Darling-integral oracle ---------------------------------------------------

def _theta(params: StableParams) -> float:
    # c (1 - i beta tan(pi alpha/2)) = exp(-i theta)
    return math.pi * float(params.alpha) * (float(params.rho) - 0.5)


def _darling(alpha: float, theta: float, z: np.ndarray, t: np.ndarray, h: float):
    """Trapezoid sum of the log-substituted Darling integral (vectorised in z)."""
    et = np.exp(t)[None, :]
    eat = np.exp(alpha * t)
    lp = np.log1p(eat * np.exp(-1j * theta))[None, :]
    lm = np.log1p(eat * np.exp(1j * theta))[None, :]
    zz = z[:, None]
    integrand = lp / (et - 1j * zz) + lm / (et + 1j * zz)
    return -(z / (2 * np.pi)) * h * integrand.sum(axis=1)


def wh_factor_log(params: StableParams, z, quad_cfg: QuadConfig | None = None):
    """ln phi(z), phi(z) = E[exp(-z S_e)] with e ~ Exp(1), from Darling's integral.

    The integral over u in R is split at 0 and mapped to t = ln|u|; the
    resulting integrand is analytic in a strip around the real t-axis, so
    the trapezoid rule converges geometrically.  The step is halved once
    and the two results compared against ``refinement_tolerance``.
    Works in double precision; ``z`` may be a scalar or an array with
    positive real part.
    """
    cfg = quad_cfg or QuadConfig()
    z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(z_arr.real <= 0):
        raise DomainError("Darling integral needs Re(z) > 0")
    alpha, theta = float(params.alpha), _theta(params)
    t_max = max(float(np.log(np.max(np.abs(z_arr)))), 0.0) + cfg.darling_pad
    h = cfg.darling_step
    n_steps = int(math.ceil((t_max - cfg.darling_t_min) / h))
    t_fine = cfg.darling_t_min + h / 2 * np.arange(2 * n_steps + 1)
    # chunk over z so the (z, t) matrix stays below ~2e6 entries
    chunk = max(1, 2_000_000 // len(t_fine))
    fine = np.empty(len(z_arr), dtype=complex)
    coarse = np.empty(len(z_arr), dtype=complex)
    for i in range(0, len(z_arr), chunk):
        zc = z_arr[i:i + chunk]
        fine[i:i + chunk] = _darling(alpha, theta, zc, t_fine, h / 2)
        coarse[i:i + chunk] = _darling(alpha, theta, zc, t_fine[::2], h)
    diff = float(np.max(np.abs(fine - coarse)))
    if diff > cfg.refinement_tolerance:
        raise QuadratureError(f"Darling integral: step-halving difference {diff:.2e}")
    return fine if np.ndim(z) else complex(fine[0])


def wh_factor(params: StableParams, z, quad_cfg: QuadConfig | None = None):
    return np.exp(wh_factor_log(params, z, quad_cfg))


def moment_crosscheck(params: StableParams, w, quad_cfg: QuadConfig | None = None,
                      tau_step: float = 0.1, tail_tol: float = 1e-13):
    """Both sides of int_0^inf z^(w-1) phi(z) dz = Gamma(w) Gamma(1-w/alpha) M(1-w).

    ``w`` may be complex with 0 < Re(w) < min(1, alpha rho).  Left side:
    quadrature in tau = ln z of e^(w tau) (phi(e^tau) - 1/(1+e^tau)) plus
    the exact pi/sin(pi w) of the subtracted term; the range is extended
    until the integrand falls below ``tail_tol``.  Right side: closed form
    (conjugated when Im(1-w) < 0; real-axis limit by Richardson
    extrapolation when w is real).  Returns ``(lhs, rhs)``.
    """
    _rational(params)
    w = complex(w)
    alpha, arho = float(params.alpha), float(params.alpha * params.rho)
    if not 0 < w.real < min(1.0, arho):
        raise DomainError(f"need 0 < Re(w) < min(1, alpha*rho) = {min(1.0, arho)}")
    cfg = quad_cfg or QuadConfig()

    def integrand(tau):
        z = np.exp(tau)
        phi = np.exp(wh_factor_log(params, z, cfg)).real
        return np.exp(w * tau) * (phi - 1 / (1 + z))

    # phi - 1/(1+z) = O(z^min(alpha rho, 1)) at 0 and O(z^-alpha rho) at infinity
    lo_rate = w.real + min(arho, 1.0)
    hi_rate = arho - w.real
    tau_lo = math.log(tail_tol) / lo_rate
    tau_hi = -math.log(tail_tol) / hi_rate + 5.0
    if tau_hi > 300:
        raise DomainError(f"w={w} too close to alpha*rho={arho}: the tail would need "
                          f"tau up to {tau_hi:.0f}")
    n_steps = 2 * int(math.ceil((tau_hi - tau_lo) / (2 * tau_step)))
    taus = tau_lo + tau_step * np.arange(n_steps + 1)
    vals = integrand(taus)
    coarse = tau_step * 2 * (vals[::2].sum() - 0.5 * (vals[0] + vals[::2][-1]))
    fine = tau_step * (vals.sum() - 0.5 * (vals[0] + vals[-1]))
    if abs(fine - coarse) > 1e-3 * cfg.refinement_tolerance + 1e-12 * abs(fine):
        raise QuadratureError(f"moment quadrature: step-halving difference {abs(fine - coarse):.2e}")

    with mp.workdps(default_dps()):
        wm = mp.mpc(w.real, w.imag) if w.imag else mp.mpf(w.real)
        lhs = mp.mpc(fine) + mp.pi / mp.sin(mp.pi * wm)
        s = 1 - wm
        if w.imag == 0:
            m_val = mellin_real(params, s)
        elif s.imag > 0:
            m_val = mellin_rational(params, s).value
        else:
            m_val = mp.conj(mellin_rational(params, mp.conj(s)).value)
        rhs = mp.gamma(wm) * mp.gamma(1 - wm / frac_to_mpf(params.alpha)) * m_val
    return lhs, rhs
