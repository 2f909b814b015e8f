"""Double-series expansions of the density p(x) of S_1 for irrational alpha.

With P_m, Q_n the sine products

    P_m = prod_{j<=m} sin(pi (rho + (j-1)/alpha)) / sin(pi j/alpha)
    Q_n = prod_{j<=n} sin(pi alpha (rho + j - 1)) / sin(pi alpha j)

the coefficients are

    a_{m,n} = (-1)^(m+n) P_m Q_n / (Gamma(1-rho-n-m/alpha) Gamma(alpha rho+m+alpha n))
    b_{m,n} = (-1)^(m+n) P_m Q_n / (Gamma(1+n+m/alpha) Gamma(-m-alpha n))

and

    p(x) = x^(alpha rho - 1) sum a_{m,n} x^(m + alpha n)        (expansion at 0)
    p(x) = x^(-1-alpha) sum b_{m,n+1} x^(-m - alpha n)          (expansion at infinity)

For alpha in (1,2) the first converges for every x > 0 and the second is
asymptotic; for alpha in (0,1) the roles are swapped.  Both require
alpha irrational: when alpha is rational some sine denominators vanish and
:class:`RationalAlphaError` is raised.

mpmath numbers have an unbounded exponent, so products of huge Gamma
reciprocals and small sines never overflow; ``log_abs`` is only used for
serialisation.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from mpmath import mp

from .errors import DomainError, RationalAlphaError
from .exact import Surd, as_real, default_dps, to_mpf
from .params import NearRationalWarning, StableParams, _sinpi, nearby_rational

# |sin| below this is treated as a vanishing denominator
SIN_GUARD = mp.mpf("1e-30")

CONVERGENT = "convergent"
ASYMPTOTIC = "asymptotic"
DEFAULT_TRUNC = {CONVERGENT: (200, 200), ASYMPTOTIC: (15, 15)}


@dataclass
class CoeffTable:
    """Rectangular table of a_{m,n} (n >= 0) or b_{m,n} (n >= 1)."""

    kind: str
    params: StableParams
    max_m: int
    max_n: int
    min_n: int
    values: list  # values[m][n - min_n]
    min_sin_denominator: object
    dps: int

    def __getitem__(self, mn):
        m, n = mn
        if not (0 <= m <= self.max_m and self.min_n <= n <= self.max_n):
            raise KeyError(mn)
        return self.values[m][n - self.min_n]

    @property
    def entries(self) -> dict:
        return {(m, n): self[m, n] for m in range(self.max_m + 1)
                for n in range(self.min_n, self.max_n + 1)}

    def to_csv(self, fh=None) -> str:
        """Write ``m,n,log_abs,sign`` rows; returns the text when fh is None."""
        out = io.StringIO() if fh is None else fh
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["m", "n", "log_abs", "sign"])
        with mp.workdps(self.dps):
            for m in range(self.max_m + 1):
                for n in range(self.min_n, self.max_n + 1):
                    v = self[m, n]
                    if v == 0:
                        writer.writerow([m, n, "-inf", 0])
                    else:
                        writer.writerow([m, n, mp.nstr(mp.log(abs(v)), 25), int(mp.sign(v))])
        return out.getvalue() if fh is None else ""


@dataclass
class DensityCurve:
    """Density values on a grid plus the settings and diagnostics that produced them."""

    xs: np.ndarray
    ps: np.ndarray
    method: str
    params: StableParams | None = None
    truncation: object = None
    diagnostics: dict = field(default_factory=dict)

    def to_rows(self):
        diag = self.diagnostics.get("error", np.full(len(self.xs), np.nan))
        return [(float(x), float(p), float(d)) for x, p, d in zip(self.xs, self.ps, diag)]

    def interp(self, x):
        return np.interp(x, self.xs, self.ps)


# sine products ---------------------------------------------------------

def _guarded_sin(arg, j: int, factor: str):
    s = _sinpi(arg)
    if s == 0 or abs(s) < SIN_GUARD:
        raise RationalAlphaError(j, factor, mp.nstr(abs(s), 5))
    return s


def _exact_or_mpf(params: StableParams):
    alpha, rho = params.alpha, params.rho
    if isinstance(alpha, (Fraction, Surd)) and isinstance(rho, (Fraction, Surd)):
        try:
            # Surd arithmetic needs a common radicand
            (alpha + rho)
            return alpha, rho, True
        except DomainError:
            pass
    return to_mpf(alpha), to_mpf(rho), False


def sine_products(params: StableParams, max_m: int, max_n: int):
    """Cumulative P_m (m <= max_m) and Q_n (n <= max_n) plus the smallest |denominator|.

    Arguments are formed exactly for exact (Fraction/Surd) parameters, so a
    rational alpha produces an exact zero denominator.
    """
    alpha, rho, _ = _exact_or_mpf(params)
    inv = 1 / alpha
    P, Q = [mp.mpf(1)], [mp.mpf(1)]
    min_den = mp.inf
    for j in range(1, max_m + 1):
        den = _guarded_sin(j * inv, j, "sin(pi*j/alpha)")
        min_den = min(min_den, abs(den))
        P.append(P[-1] * _sinpi(rho + (j - 1) * inv) / den)
    for j in range(1, max_n + 1):
        den = _guarded_sin(alpha * j, j, "sin(pi*alpha*j)")
        min_den = min(min_den, abs(den))
        Q.append(Q[-1] * _sinpi(alpha * (rho + j - 1)) / den)
    return P, Q, min_den


def _rg(x):
    return mp.rgamma(to_mpf(x))


def coeff_a(params: StableParams, m: int, n: int, dps: int | None = None):
    """a_{m,n}; reciprocal Gamma at a pole gives 0."""
    if m < 0 or n < 0:
        raise DomainError("m, n must be >= 0")
    with mp.workdps(dps or default_dps()):
        alpha, rho, _ = _exact_or_mpf(params)
        P, Q, _ = sine_products(params, m, n)
        sign = -1 if (m + n) % 2 else 1
        return sign * P[m] * Q[n] * _rg(1 - rho - n - m / alpha) * _rg(alpha * rho + m + alpha * n)


def coeff_b(params: StableParams, m: int, n: int, dps: int | None = None):
    """b_{m,n}; equals a_{m,n} times the Gamma ratio, evaluated directly."""
    if m < 0 or n < 0:
        raise DomainError("m, n must be >= 0")
    with mp.workdps(dps or default_dps()):
        alpha, rho, _ = _exact_or_mpf(params)
        P, Q, _ = sine_products(params, m, n)
        sign = -1 if (m + n) % 2 else 1
        return sign * P[m] * Q[n] * _rg(1 + n + m / alpha) * _rg(-m - alpha * n)


def coeff_table(params: StableParams, kind: str, max_m: int, max_n: int,
                dps: int | None = None) -> CoeffTable:
    """All a_{m,n}, 0<=n<=max_n, or b_{m,n}, 1<=n<=max_n, for 0<=m<=max_m."""
    if kind not in ("a", "b"):
        raise DomainError("kind must be 'a' or 'b'")
    dps = dps or default_dps()
    min_n = 0 if kind == "a" else 1
    with mp.workdps(dps):
        alpha, rho, _ = _exact_or_mpf(params)
        P, Q, min_den = sine_products(params, max_m, max_n)
        if not isinstance(alpha, Fraction):
            # no exact Gamma poles to hit off the rationals; mpf is much faster
            alpha, rho = to_mpf(alpha), to_mpf(rho)
        inv = 1 / alpha
        rows = []
        for m in range(max_m + 1):
            row = []
            for n in range(min_n, max_n + 1):
                sign = -1 if (m + n) % 2 else 1
                if kind == "a":
                    g = _rg(1 - rho - n - m * inv) * _rg(alpha * rho + m + alpha * n)
                else:
                    g = _rg(1 + n + m * inv) * _rg(-m - alpha * n)
                row.append(sign * P[m] * Q[n] * g)
            rows.append(row)
    return CoeffTable(kind, params, max_m, max_n, min_n, rows, min_den, dps)


# evaluation ------------------------------------------------------------

def _warn_near_rational(params: StableParams):
    # exact rationals fail later with RationalAlphaError naming the index
    near = nearby_rational(params.alpha)
    if near is not None:
        warnings.warn(f"alpha={params.alpha} is within 1e-4 of {near}; the series is "
                      "ill-conditioned, prefer Mellin inversion at a rational alpha",
                      NearRationalWarning, stacklevel=3)


def _role_form(params: StableParams, role: str) -> str:
    """'a' for the expansion at 0, 'b' for the expansion at infinity."""
    if role not in (CONVERGENT, ASYMPTOTIC):
        raise DomainError(f"role must be {CONVERGENT!r} or {ASYMPTOTIC!r}")
    at_zero_converges = params.alpha > 1
    if role == CONVERGENT:
        return "a" if at_zero_converges else "b"
    return "b" if at_zero_converges else "a"


def _diagonals(table: CoeffTable):
    M, N, n0 = table.max_m, table.max_n - table.min_n, table.min_n
    diags = []
    for d in range(M + N + 1):
        ms = range(max(0, d - N), min(d, M) + 1)
        diags.append([(m, d - m, table.values[m][d - m]) for m in ms])
    return diags


def evaluate_table(table: CoeffTable, xs, dps: int | None = None):
    """Sum the table's series at each x, diagonal by diagonal (m + n increasing).

    Returns (values, boundary, condition) where ``boundary`` is the largest
    term on the last row/column (truncation proxy) and ``condition`` the
    ratio sum|terms| / |sum|.
    """
    params = table.params
    dps = dps or table.dps
    out, boundary, cond = [], [], []
    with mp.workdps(dps):
        alpha, rho = to_mpf(params.alpha), to_mpf(params.rho)
        diags = _diagonals(table)
        M, Nn = table.max_m, table.max_n - table.min_n
        for x in xs:
            x = mp.mpf(x)
            if x <= 0:
                raise DomainError("density series need x > 0")
            if table.kind == "a":
                y = x
                pref = x ** (alpha * rho - 1)
            else:
                y = 1 / x
                pref = x ** (-1 - alpha)
            ym = [mp.mpf(1)]
            for _ in range(M):
                ym.append(ym[-1] * y)
            ya = [y ** (alpha * k) for k in range(Nn + 1)]
            total = mp.mpf(0)
            abs_total = mp.mpf(0)
            for diag in diags:
                terms = [c * ym[m] * ya[k] for m, k, c in diag]
                total += mp.fsum(terms)
                abs_total += mp.fsum(terms, absolute=True)
            edge = max([abs(table.values[M][k] * ym[M] * ya[k]) for k in range(Nn + 1)]
                       + [abs(table.values[m][Nn] * ym[m] * ya[Nn]) for m in range(M + 1)])
            out.append(pref * total)
            boundary.append(pref * edge)
            cond.append(abs_total / abs(total) if total != 0 else mp.inf)
    return out, boundary, cond


def density_series(params: StableParams, xs, role: str = CONVERGENT, trunc=None,
                   dps: int | None = None, table: CoeffTable | None = None) -> DensityCurve:
    """Density from the convergent or asymptotic double series.

    ``trunc=(M, N)`` keeps 0<=m<=M and N+1 values of the second index;
    defaults are (200, 200) for the convergent and (15, 15) for the
    asymptotic role.
    """
    _warn_near_rational(params)
    form = _role_form(params, role)
    M, N = trunc or DEFAULT_TRUNC[role]
    if table is None:
        table = coeff_table(params, form, M, N if form == "a" else N + 1, dps=dps)
    elif table.kind != form:
        raise DomainError(f"role {role} needs a '{form}' table")
    xs = np.asarray(xs, dtype=float)
    vals, boundary, cond = evaluate_table(table, xs, dps)
    return DensityCurve(
        xs=xs,
        ps=np.array([float(v) for v in vals]),
        method=f"{role}_series",
        params=params,
        truncation=(M, N),
        diagnostics={"error": np.array([float(b) for b in boundary]),
                     "condition": np.array([float(c) for c in cond]),
                     "min_sin_denominator": float(table.min_sin_denominator),
                     "dps": table.dps},
    )


def series_mass(params: StableParams, x_star=5, trunc_conv=None, trunc_asym=None,
                dps: int | None = None):
    """Total mass from term-by-term integration of both expansions.

    For alpha in (1,2): int_0^x* of the convergent series plus
    int_x*^inf of the asymptotic one (roles swapped for alpha < 1).
    """
    M, N = trunc_conv or DEFAULT_TRUNC[CONVERGENT]
    Ma, Na = trunc_asym or DEFAULT_TRUNC[ASYMPTOTIC]
    with mp.workdps(dps or default_dps()):
        alpha, rho = to_mpf(params.alpha), to_mpf(params.rho)
        xs = mp.mpf(x_star)
        # a-series on (0, x*), b-series on (x*, inf)
        if params.alpha > 1:
            ta = coeff_table(params, "a", M, N, dps)
            tb = coeff_table(params, "b", Ma, Na + 1, dps)
        else:
            ta = coeff_table(params, "a", Ma, Na, dps)
            tb = coeff_table(params, "b", M, N + 1, dps)
        head = mp.fsum(ta[m, n] * xs ** (alpha * rho + m + alpha * n) / (alpha * rho + m + alpha * n)
                       for m in range(ta.max_m + 1) for n in range(ta.max_n + 1))
        tail = mp.fsum(tb[m, n] * xs ** (-alpha * n - m) / (alpha * n + m)
                       for m in range(tb.max_m + 1) for n in range(1, tb.max_n + 1))
        return head + tail, head, tail


def perturbation_average(alpha0, delta, rho, xs, trunc=None,
                         dps: int | None = None) -> DensityCurve:
    """(p(x; alpha0+delta, rho) + p(x; alpha0-delta, rho)) / 2 from the convergent series."""
    alpha0, delta = as_real(alpha0), as_real(delta)
    if isinstance(delta, (int, Fraction)):
        raise DomainError("delta must be irrational (e.g. sqrt(2)/50); a rational "
                          "perturbation leaves the series undefined")
    plus = StableParams(alpha0 + delta, rho)
    minus = StableParams(alpha0 - delta, rho)
    c_plus = density_series(plus, xs, CONVERGENT, trunc, dps)
    c_minus = density_series(minus, xs, CONVERGENT, trunc, dps)
    return DensityCurve(
        xs=c_plus.xs,
        ps=(c_plus.ps + c_minus.ps) / 2,
        method="perturbation_average",
        params=None,
        truncation=c_plus.truncation,
        diagnostics={"error": np.maximum(c_plus.diagnostics["error"],
                                         c_minus.diagnostics["error"]),
                     "alpha_plus": str(plus.alpha), "alpha_minus": str(minus.alpha),
                     "spread": np.abs(c_plus.ps - c_minus.ps) / 2},
    )
