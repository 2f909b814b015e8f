"""Complex special functions at extended precision.

Everything here operates on mpmath scalars at the *current* mpmath
precision (see :func:`stable_extrema.exact.working_precision`).

The dilogarithm is evaluated in three regimes on the closed unit disk:

* ``|z| <= 1/2``: the power series ``sum z**k / k**2``;
* ``|1 - z| < 1/10``: the reflection ``Li2(z) = -Li2(1-z) + pi^2/6 -
  ln(1-z) ln(z)`` with the power series for ``Li2(1-z)``;
* elsewhere: the expansion in ``w = ln(1-z)`` whose coefficients involve
  ``zeta(2n) - 1``; its n-th term is below ``3 / 20**n``.
"""

from __future__ import annotations

import math
import warnings

from mpmath import mp

from .errors import BranchError, DomainError, PoleError

_ZETA_CACHE: dict[int, list] = {}

# the log-series terms decay at least like 3/20**n on D \ D1
_MAX_LOG_TERMS = 400


class PrecisionWarning(UserWarning):
    """Requested precision is not reachable within the term budget."""


def _eps():
    return mp.mpf(2) ** (-mp.prec - 4)


# zeta(2n) - 1 ----------------------------------------------------------

def zeta_minus_one(n_terms: int) -> list:
    """[zeta(2n) - 1 for n = 1..n_terms] at the current precision (cached).

    Direct summation of ``k**(-2n)`` for ``k = 2..K-1`` plus an
    Euler-Maclaurin tail for ``k >= K``.  For the completely monotone
    summand the Euler-Maclaurin remainder is bounded by the first omitted
    correction, which is checked against the working epsilon.
    """
    prec = mp.prec
    cached = _ZETA_CACHE.get(prec)
    if cached is not None and len(cached) >= n_terms:
        return cached[:n_terms]

    dps = mp.dps
    K = max(16, dps)
    J = dps // 2 + 8
    eps = _eps()
    with mp.workprec(prec + 20):
        bern = [mp.bernoulli(2 * j) / mp.factorial(2 * j) for j in range(1, J + 2)]
        values = []
        for n in range(1, n_terms + 1):
            s = 2 * n
            head = mp.fsum(mp.mpf(k) ** (-s) for k in range(2, K))
            Kf = mp.mpf(K)
            tail = Kf ** (1 - s) / (s - 1) + Kf ** (-s) / 2
            rising = mp.mpf(s)  # s (s+1) ... (s+2j-2)
            bound = None
            for j in range(1, J + 2):
                term = bern[j - 1] * rising * Kf ** (-s - 2 * j + 1)
                if j == J + 1:
                    bound = abs(term)
                    break
                tail += term
                rising *= (s + 2 * j - 1) * (s + 2 * j)
            if bound > eps * (head + tail):
                warnings.warn(f"zeta({s})-1 tail bound {bound} above working epsilon",
                              PrecisionWarning, stacklevel=2)
            values.append(head + tail)
    values = [+v for v in values]
    _ZETA_CACHE[prec] = values
    return values[:n_terms]


# dilogarithm -----------------------------------------------------------

def _li2_power(z):
    """Plain series sum z**k/k**2; caller guarantees |z| <= 1/2 or so."""
    r = abs(z)
    if r == 0:
        return mp.mpc(0)
    eps = _eps()
    # |tail after N| <= r**(N+1) / ((N+1)**2 (1-r))
    n_max = int(mp.ceil(mp.log(eps * (1 - r)) / mp.log(r))) + 2
    total = mp.mpc(0)
    power = mp.mpc(1)
    for k in range(1, n_max + 1):
        power *= z
        total += power / (k * k)
    return total


def _li2_reflection(z, one_minus_z=None):
    """Li2 via -Li2(1-z) + pi^2/6 - ln(1-z) ln z, for z close to 1."""
    w1 = (1 - z) if one_minus_z is None else one_minus_z
    if w1 == 0:
        return mp.pi ** 2 / 6
    return -_li2_power(w1) + mp.pi ** 2 / 6 - mp.log(w1) * mp.log(z)


def _li2_logseries(z, one_minus_z=None):
    """Li2 via the expansion in w = ln(1-z) with zeta(2n)-1 coefficients."""
    w1 = (1 - z) if one_minus_z is None else one_minus_z
    w = mp.log(w1)
    two_pi_i = 2j * mp.pi
    r = abs(w / (2 * mp.pi)) ** 2
    ratio = r / 4
    if ratio >= 1:
        raise DomainError("log-series dilogarithm needs |ln(1-z)| < 4*pi")
    eps = _eps()
    # n-th term is below 3 * (r/4)**n since 4**n (zeta(2n)-1) < 3
    n_max = int(mp.ceil(mp.log(eps * (1 - ratio) / (6 * (abs(w) + 1))) / mp.log(ratio))) + 1 \
        if ratio > 0 else 1
    if n_max > _MAX_LOG_TERMS:
        warnings.warn(f"dilog log-series truncated at {_MAX_LOG_TERMS} terms "
                      f"(needed {n_max})", PrecisionWarning, stacklevel=3)
        n_max = _MAX_LOG_TERMS
    zm1 = zeta_minus_one(max(n_max, 1))
    x = (w / (2 * mp.pi)) ** 2
    total = mp.mpc(0)
    power = mp.mpc(1)
    for n in range(1, n_max + 1):
        power *= -x
        total += zm1[n - 1] / (2 * n + 1) * power
    return (-3 * w - w * w / 4 + two_pi_i * mp.log((two_pi_i + w) / (two_pi_i - w))
            + 2 * w * total)


def _dilog(z, one_minus_z=None):
    """Regime dispatch; ``one_minus_z`` may carry an accurate 1 - z."""
    w1 = (1 - z) if one_minus_z is None else one_minus_z
    if abs(z) <= mp.mpf(1) / 2:
        return _li2_power(z)
    if abs(w1) < mp.mpf(1) / 10:
        return _li2_reflection(z, w1)
    return _li2_logseries(z, w1)


def dilog(z):
    """Principal-branch dilogarithm Li2(z) on the closed unit disk minus 1.

    >>> from mpmath import mp
    >>> abs(dilog(mp.mpf(-1)) + mp.pi**2 / 12) < 1e-14
    True
    """
    z = mp.mpc(z)
    if z == 0:
        return mp.mpc(0)
    if z.imag == 0 and z.real >= 1:
        raise DomainError(f"dilog: z={z} lies on the branch cut [1, inf)")
    if abs(z) > 1 + 10 * _eps():
        raise DomainError(f"dilog: |z|={abs(z)} > 1 is outside the supported disk")
    return _dilog(z)


# Gamma -----------------------------------------------------------------

def log_gamma(z):
    """Principal branch of ln Gamma(z)."""
    z = mp.mpmathify(z)
    if z.imag == 0 and z.real <= 0 and z.real == mp.floor(z.real):
        raise PoleError(f"log_gamma: pole at z={z}")
    return mp.loggamma(z)


def rgamma(z):
    """1/Gamma(z), zero at the poles."""
    return mp.rgamma(z)


# modified q-Pochhammer and H_{m,n} -------------------------------------

def _log_one_minus(x):
    """Principal ln(1 - x) for |x| < 1 (and |x| = 1, x != 1)."""
    y = 1 - x
    if y.imag == 0 and y.real <= 0:
        raise BranchError(f"1 - a q^k = {y} lies on the cut (-inf, 0]")
    return mp.log(y)


def q_pochhammer_mod(a, q, n: int):
    """[a; q]_n = prod_{k=1}^{n-1} (1 - a q**k)**(k/n), principal powers."""
    a, q = mp.mpc(a), mp.mpc(q)
    if n < 1:
        raise DomainError("q_pochhammer_mod needs n >= 1")
    if abs(a) >= 1:
        raise DomainError(f"q_pochhammer_mod needs |a| < 1, got {abs(a)}")
    if abs(q) > 1:
        raise DomainError(f"q_pochhammer_mod needs |q| <= 1, got {abs(q)}")
    log_total = mp.mpc(0)
    qk = mp.mpc(1)
    for k in range(1, n):
        qk *= q
        log_total += mp.mpf(k) / n * _log_one_minus(a * qk)
    return mp.exp(log_total)


def _one_minus_exp2pi(theta):
    """(1 - exp(2 pi i theta), 2 pi i theta') with theta' = theta reduced mod 1.

    The reduction and expm1 keep the result accurate when exp(2 pi i theta)
    is close to 1, i.e. theta close to an integer.
    """
    theta = mp.mpc(theta)
    theta = theta - mp.nint(theta.real)
    arg = 2j * mp.pi * theta
    return -mp.expm1(arg), arg


def _log_q_pochhammer_exp(s, step: int, n: int):
    """ln [e^{2 pi i s/n}; e^{2 pi i step/n}]_n with exact phase reduction."""
    total = mp.mpc(0)
    for k in range(1, n):
        y, _ = _one_minus_exp2pi((s + k * step) / n)
        if y.imag == 0 and y.real <= 0:
            raise BranchError(f"factor 1 - a q^{k} = {y} on the cut")
        total += mp.mpf(k) / n * mp.log(y)
    return total


def log_h_mn(m: int, n: int, s):
    """ln H_{m,n}(s) for Im(s) > 0 (see :func:`h_mn`)."""
    s = mp.mpc(s)
    if m < 1 or n < 1 or math.gcd(m, n) != 1:
        raise DomainError(f"H_{{m,n}} needs coprime positive m, n; got ({m}, {n})")
    if s.imag <= 0:
        raise DomainError(f"H_{{m,n}}(s) needs Im(s) > 0, got {s}")
    one_minus_z, log_z = _one_minus_exp2pi(s)
    z = 1 - one_minus_z
    mn = m * n
    li2 = _dilog(z, one_minus_z)
    out = -li2 / (2j * mp.pi * mn) + (1 - s / mn) * mp.log(one_minus_z)
    out -= _log_q_pochhammer_exp(s, n, m)
    out -= _log_q_pochhammer_exp(s, m, n)
    return out


def h_mn(m: int, n: int, s):
    """H_{m,n}(s) = exp(-Li2(e^{2 pi i s})/(2 pi i mn)) (1 - e^{2 pi i s})^{1 - s/(mn)}
    / ([e^{2 pi i s/m}; e^{2 pi i n/m}]_m [e^{2 pi i s/n}; e^{2 pi i m/n}]_n).
    """
    return mp.exp(log_h_mn(m, n, s))
