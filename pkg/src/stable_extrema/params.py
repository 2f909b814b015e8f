"""Stable-process parametrization: (alpha, beta) <-> (alpha, rho).

The characteristic exponent is

    Psi(z) = c |z|**alpha (1 - i beta tan(pi alpha / 2) sign z)

with the scale normalised so that c**2 (1 + beta**2 tan(pi alpha/2)**2) = 1,
and rho = P(X_1 > 0).  Parameters are validated against the admissible set

    A = {alpha in (0,1), rho in (0,1)} U {alpha in (1,2), rho in [1-1/alpha, 1/alpha]}.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp

from .errors import DomainError
from .exact import Surd, as_real, to_mpf

# membership tolerance for rho in C(alpha) when alpha is not exactly rational
DONEY_TOL = 1e-12


class NearRationalWarning(UserWarning):
    """alpha is within a small distance of a rational with small denominator."""


def _alpha_ok(alpha) -> bool:
    return (0 < alpha < 1) or (1 < alpha < 2)


def rho_bounds(alpha):
    """Admissible closed/open interval for rho given alpha."""
    if alpha < 1:
        return 0, 1
    return 1 - 1 / alpha, 1 / alpha


def is_admissible(alpha, rho) -> bool:
    if not (isinstance(alpha, (int, Fraction, Surd)) and isinstance(rho, (int, Fraction, Surd))):
        alpha, rho = to_mpf(alpha), to_mpf(rho)
    if not _alpha_ok(alpha):
        return False
    if alpha < 1:
        return 0 < rho < 1
    lo, hi = rho_bounds(alpha)
    return lo <= rho <= hi


def _sinpi(x):
    """sin(pi x) with exact zeros at integers for exact input."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return mp.mpf(0)
    return mp.sinpi(to_mpf(x))


@dataclass(frozen=True)
class StableParams:
    """Validated (alpha, rho) pair.

    ``alpha`` and ``rho`` keep whatever exactness they were given
    (Fraction, Surd or mpf).  ``beta`` and ``c`` are derived on access at
    the current mpmath precision.

    >>> p = StableParams("3/2", "3/5")
    >>> p.alpha_rational
    (3, 2)
    """

    alpha: object
    rho: object
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        alpha, rho = as_real(self.alpha), as_real(self.rho)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "rho", rho)
        if not _alpha_ok(alpha):
            raise DomainError(f"alpha={alpha} must lie in (0,1) U (1,2)")
        if not is_admissible(alpha, rho):
            lo, hi = rho_bounds(alpha)
            raise DomainError(f"(alpha, rho)=({alpha}, {rho}) not admissible; "
                              f"rho must lie in [{lo}, {hi}]")

    @classmethod
    def from_beta(cls, alpha, beta) -> "StableParams":
        alpha = as_real(alpha)
        return cls(alpha, rho_from_beta(alpha, beta))

    # derived quantities ------------------------------------------------

    @property
    def alpha_rational(self):
        """Coprime (m, n) with alpha = m/n when alpha is stored exactly rational."""
        if isinstance(self.alpha, Fraction):
            return self.alpha.numerator, self.alpha.denominator
        return None

    @property
    def alpha_mpf(self):
        return to_mpf(self.alpha)

    @property
    def rho_mpf(self):
        return to_mpf(self.rho)

    @property
    def beta(self):
        return beta_from_rho(self.alpha, self.rho)[0]

    @property
    def c(self):
        return beta_from_rho(self.alpha, self.rho)[1]

    @property
    def spectrally_positive(self) -> bool:
        """No negative jumps: alpha > 1 and rho = 1 - 1/alpha."""
        return self.alpha > 1 and _exact_eq(self.rho, 1 - 1 / self.alpha)

    @property
    def spectrally_negative(self) -> bool:
        return self.alpha > 1 and _exact_eq(self.rho, 1 / self.alpha)

    def with_alpha(self, alpha) -> "StableParams":
        return StableParams(alpha, self.rho)

    def __str__(self):
        return f"(alpha={self.alpha}, rho={self.rho})"


def _exact_eq(a, b) -> bool:
    if isinstance(a, (Fraction, Surd)) and isinstance(b, (Fraction, Surd)):
        try:
            return a == b
        except DomainError:
            return False
    return abs(to_mpf(a) - to_mpf(b)) < DONEY_TOL


def rho_from_beta(alpha, beta):
    """rho = 1/2 + arctan(beta tan(pi alpha/2)) / (pi alpha)."""
    alpha = as_real(alpha)
    if not _alpha_ok(alpha):
        raise DomainError(f"alpha={alpha} must lie in (0,1) U (1,2)")
    if isinstance(beta, (int, Fraction)) and abs(beta) == 1 and alpha > 1:
        # spectrally one-sided boundary, kept exact
        return 1 - 1 / alpha if beta == 1 else 1 / alpha
    b = to_mpf(as_real(beta))
    if abs(b) > 1:
        raise DomainError(f"beta={beta} must lie in [-1, 1]")
    if alpha < 1 and abs(b) == 1:
        raise DomainError("|beta| = 1 with alpha < 1 makes |X| a subordinator")
    a = to_mpf(alpha)
    return mp.mpf(1) / 2 + mp.atan(b * mp.tan(mp.pi * a / 2)) / (mp.pi * a)


def beta_from_rho(alpha, rho):
    """Inverse of :func:`rho_from_beta`, also returning the normalised scale c."""
    alpha, rho = as_real(alpha), as_real(rho)
    if not is_admissible(alpha, rho):
        raise DomainError(f"(alpha, rho)=({alpha}, {rho}) not admissible")
    a, r = to_mpf(alpha), to_mpf(rho)
    theta = mp.pi * a * (r - mp.mpf(1) / 2)
    beta = mp.tan(theta) / mp.tan(mp.pi * a / 2)
    return beta, mp.cos(theta)


def levy_density(params: StableParams, x):
    """Density of the Levy measure with the normalisation above."""
    x = to_mpf(as_real(x)) if not isinstance(x, mp.mpf) else x
    if x == 0:
        raise DomainError("Levy density is singular at x = 0")
    alpha, rho = params.alpha, params.rho
    if x > 0:
        weight = _sinpi(alpha * rho)
    else:
        weight = _sinpi(alpha * (1 - rho))
    a = to_mpf(alpha)
    return abs(x) ** (-1 - a) * weight / (2 * mp.sin(mp.pi * a / 2))


@dataclass(frozen=True)
class Classification:
    """Summary of the arithmetic nature of (alpha, rho)."""

    alpha_rational: tuple | None
    doney: tuple | None  # (k, l) with rho + k = l/alpha
    in_C: bool
    search_bound: int
    spectrally_positive: bool
    spectrally_negative: bool
    nearby_rational: Fraction | None  # small-denominator rational within 1e-4

    @property
    def conclusive(self) -> bool:
        """False when membership was only searched up to a bound."""
        return self.alpha_rational is not None or self.in_C


def nearby_rational(alpha, max_denominator: int = 50, tol: float = 1e-4):
    """A rational p/q, q <= max_denominator, within ``tol`` of alpha (or None)."""
    if isinstance(alpha, Fraction):
        return None
    a = to_mpf(alpha)
    approx = Fraction(str(mp.nstr(a, 30))).limit_denominator(max_denominator)
    if abs(a - to_mpf(approx)) < tol:
        return approx
    return None


def classify(params: StableParams, search_bound: int = 1000,
             tol: float = DONEY_TOL) -> Classification:
    """Report rationality, Doney class membership and one-sidedness.

    For irrational alpha a failed search means "not found up to bound",
    reflected by ``Classification.conclusive``.
    """
    from .diophantine import doney_search

    if search_bound < 1:
        raise DomainError("search_bound must be >= 1")
    kl = doney_search(params, k_bound=search_bound * 2 + 2, l_bound=search_bound, tol=tol)
    near = nearby_rational(params.alpha)
    if near is not None:
        warnings.warn(f"alpha={params.alpha} is within 1e-4 of {near}; series coefficients "
                      "will be ill-conditioned, prefer the Mellin inversion method",
                      NearRationalWarning, stacklevel=2)
    return Classification(
        alpha_rational=params.alpha_rational,
        doney=kl,
        in_C=kl is not None,
        search_bound=search_bound,
        spectrally_positive=params.spectrally_positive,
        spectrally_negative=params.spectrally_negative,
        nearby_rational=near,
    )


def admissible_rho_interval(alpha):
    """Closed hull of admissible rho values as floats (for grids)."""
    lo, hi = rho_bounds(as_real(alpha))
    return float(lo), float(hi)
