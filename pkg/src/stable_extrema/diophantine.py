"""Continued fractions and the arithmetic sets that govern series convergence.

* L~ : irrationals x with a_{n+1} > b^(q_n ln(q_n)^(1+eps)) for infinitely
  many n (continued-fraction characterisation);
* C(alpha) = {rho in (0,1) : rho = {l/alpha}, l in Z}, equivalently
  rho + k = l/alpha (Doney classes);
* B(alpha) = {rho : ||alpha rho + n alpha|| < n^(-ln ln(1+n)) infinitely often}.

Membership in L~ and B(alpha) quantifies over infinitely many n, so the
tests here only report witnesses *consistent with* membership up to the
depth examined, never membership itself.

All convergent arithmetic is exact (Python integers).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
from mpmath import mp

from .errors import DomainError, PrecisionExhausted, ResourceError
from .exact import Surd, as_real, dist_to_int, parse_real, to_mpf
from .params import DONEY_TOL, StableParams

WITNESSED = "witnessed_yes"
NO_WITNESS = "no_witness_up_to_bound"

# largest quotient construct_L_tilde may materialise
DEFAULT_BIT_BUDGET = 1 << 20


@dataclass
class ContinuedFraction:
    """x = [a0; a1, a2, ...] with exact convergents p_n/q_n, n = 0..len(quotients).

    ``construction`` records the (b, eps) rule used by construct_L_tilde;
    it certifies how the (unmaterialised) tail continues.  ``exhausted``
    is set when the source value did not determine further quotients.
    """

    a0: int
    quotients: list = field(default_factory=list)
    convergents: list = field(default_factory=list)
    exhausted: bool = False
    terminated: bool = False
    construction: dict | None = None

    def __post_init__(self):
        if not self.convergents:
            self.convergents = _convergents(self.a0, self.quotients)

    @property
    def depth(self) -> int:
        return len(self.quotients)

    def q(self, n: int) -> int:
        return self.convergents[n][1]

    def p(self, n: int) -> int:
        return self.convergents[n][0]

    def fraction(self, n: int | None = None) -> Fraction:
        n = self.depth if n is None else n
        p, q = self.convergents[n]
        return Fraction(p, q)

    def determinant_ok(self) -> bool:
        """p_n q_{n-1} - p_{n-1} q_n = (-1)^(n-1) for every n >= 1."""
        prev = (1, 0)
        for n, (p, q) in enumerate(self.convergents):
            if p * prev[1] - prev[0] * q != (-1) ** (n - 1):
                return False
            prev = (p, q)
        return True

    def shift(self, k: int) -> "ContinuedFraction":
        """x + k for an integer k (membership in L~ is preserved)."""
        return ContinuedFraction(self.a0 + k, list(self.quotients), exhausted=self.exhausted,
                                 terminated=self.terminated, construction=self.construction)

    def reflect(self, k: int) -> "ContinuedFraction":
        """k - x (membership in L~ is preserved; denominators q_n are kept).

        Uses 1 - [0; a1, a2, ...] = [0; 1, a1 - 1, a2, ...] for a1 >= 2 and
        1 - [0; 1, a2, ...] = [0; a2 + 1, a3, ...].
        """
        if not self.quotients:
            raise DomainError("need at least one quotient to reflect")
        a1, rest = self.quotients[0], list(self.quotients[1:])
        if a1 >= 2:
            tail = [1, a1 - 1] + rest
        elif rest:
            tail = [rest[0] + 1] + rest[1:]
        else:
            raise DomainError("cannot reflect [a0; 1] without further quotients")
        # k - a0 - frac = (k - a0 - 1) + (1 - frac)
        return ContinuedFraction(k - self.a0 - 1, tail, exhausted=self.exhausted,
                                 terminated=self.terminated, construction=self.construction)

    def to_mpf(self):
        return mp.mpf(self.p(self.depth)) / self.q(self.depth)

    def to_dict(self) -> dict:
        return {"a0": str(self.a0), "quotients": [str(a) for a in self.quotients],
                "convergents": [[str(p), str(q)] for p, q in self.convergents],
                "exhausted": self.exhausted, "terminated": self.terminated,
                "construction": self.construction}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "ContinuedFraction":
        return cls(int(d["a0"]), [int(a) for a in d["quotients"]],
                   exhausted=d.get("exhausted", False), terminated=d.get("terminated", False),
                   construction=d.get("construction"))

    def __str__(self):
        tail = ", ".join(str(a) if a < 10 ** 12 else f"<{len(str(a))} digits>"
                         for a in self.quotients)
        return f"[{self.a0}; {tail}]"


def _convergents(a0: int, quotients) -> list:
    p_prev, q_prev = 1, 0
    p, q = a0, 1
    out = [(p, q)]
    for a in quotients:
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        out.append((p, q))
    return out


@dataclass
class MembershipVerdict:
    set: str
    verdict: str
    witness: list | None = None
    checked_up_to: int | None = None
    note: str = ""

    @property
    def witnessed(self) -> bool:
        return self.verdict == WITNESSED

    def to_dict(self):
        return asdict(self)


# expansion -------------------------------------------------------------------

def _cf_exact(x, depth: int, canonical: bool = False):
    """Euclid on an exact Fraction or Surd value."""
    a0 = math.floor(x)
    quotients = []
    r = x - a0
    terminated = False
    while len(quotients) < depth:
        if r == 0:
            terminated = True
            break
        y = 1 / r
        a = math.floor(y)
        quotients.append(a)
        r = y - a
    if isinstance(x, Fraction) and r == 0:
        terminated = True
    if terminated and not canonical and quotients and quotients[-1] > 1 and len(quotients) < depth:
        # [..., a] = [..., a-1, 1]: the form whose convergents are shared
        # with every nearby irrational
        quotients[-1] -= 1
        quotients.append(1)
    return a0, quotients, terminated


def _cf_interval(lo: Fraction, hi: Fraction, depth: int):
    """Quotients shared by every number in [lo, hi]."""
    a0_lo, a0_hi = math.floor(lo), math.floor(hi)
    if a0_lo != a0_hi:
        return None, [], True
    quotients = []
    rl, rh = lo - a0_lo, hi - a0_hi
    exhausted = False
    while len(quotients) < depth:
        if rl == 0 or rh == 0:
            exhausted = True
            break
        yl, yh = 1 / rl, 1 / rh
        al, ah = math.floor(yl), math.floor(yh)
        if al != ah:
            exhausted = True
            break
        quotients.append(al)
        rl, rh = yl - al, yh - ah
    return a0_lo, quotients, exhausted


def cf_expand(x, depth: int, strict: bool = True, canonical: bool = False) -> ContinuedFraction:
    """Continued fraction of ``x`` to ``depth`` partial quotients.

    Exact for int/Fraction/Surd.  A rational terminates early and, unless
    ``canonical``, ends in the quotient 1 ([3; 7, 15, 1] rather than
    [3; 7, 16] for 355/113).  For an mpf
    the value is treated as the interval x(1 +- 2^(2-prec)) and only the
    quotients common to the whole interval are returned; if fewer than
    ``depth`` are determined, PrecisionExhausted is raised (``strict``) or
    the partial expansion is returned with ``exhausted=True``.

    >>> str(cf_expand("355/113", 10))
    '[3; 7, 15, 1]'
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    x = as_real(x) if not isinstance(x, (Fraction, Surd)) else x
    if isinstance(x, (Fraction, Surd)):
        a0, qs, terminated = _cf_exact(x, depth, canonical)
        return ContinuedFraction(a0, qs, terminated=terminated)
    x = mp.mpf(x)
    if not mp.isfinite(x):
        raise DomainError("cannot expand a non-finite value")
    m, e = mp.frexp(x)
    exact = Fraction(int(m * 2 ** mp.prec), 2 ** mp.prec) * (Fraction(2) ** e)
    delta = abs(exact) / 2 ** (mp.prec - 2) + Fraction(1, 2 ** (mp.prec + 64))
    a0, qs, exhausted = _cf_interval(exact - delta, exact + delta, depth)
    if a0 is None:
        raise PrecisionExhausted("integer part of x not determined by its precision")
    if exhausted and strict:
        raise PrecisionExhausted(f"only {len(qs)} of {depth} quotients are determined "
                                 f"at {mp.dps} digits")
    return ContinuedFraction(a0, qs, exhausted=exhausted)


# L~ ----------------------------------------------------------------------------

def _log_threshold(q: int, b, eps):
    """ln of b^(q ln(q)^(1+eps))."""
    return q * mp.log(q) ** (1 + mp.mpf(eps)) * mp.log(mp.mpf(b))


def _log_int(a: int):
    # mpmath converts big ints exactly enough for a logarithm
    return mp.log(mp.mpf(a))


def test_L_tilde(cf: ContinuedFraction, b, eps) -> MembershipVerdict:
    """Look for n with a_{n+1} > b^(q_n ln(q_n)^(1+eps)).

    Levels with q_n = 1 are skipped: there the threshold is b^0 = 1 and
    the inequality carries no information.
    """
    if not (b > 1 and eps > 0):
        raise DomainError("need b > 1 and eps > 0")
    if len(cf.convergents) < 2:
        raise DomainError("need at least two convergents")
    witnesses = []
    with mp.workdps(30):
        for n in range(cf.depth):
            qn, a_next = cf.q(n), cf.quotients[n]
            if qn < 2:
                continue
            margin = _log_int(a_next) - _log_threshold(qn, b, eps)
            if margin > 0:
                witnesses.append({"n": n, "q_n": str(qn), "a_next": str(a_next),
                                  "log_margin": mp.nstr(margin, 10)})
    return MembershipVerdict(
        set="L_tilde", verdict=WITNESSED if witnesses else NO_WITNESS,
        witness=witnesses or None, checked_up_to=cf.depth,
        note="finitely many witnesses are consistent with, not proof of, membership")


def _real_mpf(v):
    # construction parameters are stored as strings such as "0.1" or "1/10"
    return to_mpf(parse_real(v, warn_decimal=False) if isinstance(v, str) else as_real(v))


def construct_L_tilde(b=2, eps=0.1, levels: int = 3,
                      bit_budget: int = DEFAULT_BIT_BUDGET) -> ContinuedFraction:
    """x = [0; a1, ..., a_levels] with a_{n+1} = ceil(b^(q_n ln(q_n)^(1+eps))) + 1.

    Starting from q_0 = 1 the rule gives a1 = 2, the seed [0; 2].  Every
    constructed quotient satisfies the L~ inequality with margin; the
    infinite continuation by the same rule defines an element of L~, and
    ``construction`` records the rule so later code can bound q_{n+1}.
    """
    if levels < 2:
        raise DomainError("levels must be >= 2")
    b = as_real(b)
    b_mpf, eps_mpf = to_mpf(b), _real_mpf(eps)
    if not (b_mpf > 1 and eps_mpf > 0):
        raise DomainError("need b > 1 and eps > 0")
    quotients = []
    q_prev, q = 0, 1
    for _ in range(levels):
        with mp.workdps(30):
            exponent_bits = _log_threshold(q, b_mpf, eps_mpf) / mp.log(2) if q > 1 else mp.mpf(0)
        if exponent_bits > bit_budget:
            raise ResourceError(f"next quotient needs ~{int(exponent_bits)} bits "
                                f"(budget {bit_budget})")
        with mp.workprec(int(exponent_bits) + 96):
            power = mp.power(b_mpf, q * mp.log(q) ** (1 + eps_mpf)) if q > 1 else mp.mpf(1)
            a = int(mp.ceil(power)) + 1
        quotients.append(a)
        q_prev, q = q, a * q + q_prev
    return ContinuedFraction(0, quotients,
                             construction={"b": str(b), "eps": str(eps), "rule": "ceil+1"})


def log_q_next_lower(cf: ContinuedFraction, n: int):
    """Lower bound for ln q_{n+1}: exact if materialised, else from the construction rule."""
    if n + 1 <= cf.depth:
        return _log_int(cf.q(n + 1))
    if cf.construction is None or n != cf.depth:
        raise DomainError(f"q_{n + 1} is neither materialised nor covered by a construction rule")
    b = _real_mpf(cf.construction["b"])
    eps = _real_mpf(cf.construction["eps"])
    qn = cf.q(n)
    # q_{n+1} = a_{n+1} q_n + q_{n-1} > b^(q_n ln(q_n)^(1+eps)) q_n
    return _log_threshold(qn, b, eps) + mp.log(qn)


def alpha_q_distance_check(cf: ContinuedFraction, n: int, b, eps) -> bool:
    """||alpha q_n|| < q_n b^(-q_n ln(q_n)^(1+eps)), checked via ||alpha q_n|| < 1/q_{n+1}."""
    qn = cf.q(n)
    with mp.workdps(30):
        return -log_q_next_lower(cf, n) < mp.log(qn) - _log_threshold(qn, b, eps)


# C(alpha), Doney classes -----------------------------------------------------

def doney_search(params: StableParams, k_bound: int = 100, l_bound: int = 100,
                 tol: float = DONEY_TOL):
    """(k, l) with rho + k = l/alpha, |k| <= k_bound, |l| <= l_bound.

    Exact for exactly rational (or same-radicand surd) parameters, within
    ``tol`` otherwise.  Positive l are tried first, smallest first, then
    negative l.  Returns None when no pair is found.
    """
    alpha, rho = params.alpha, params.rho
    order = list(range(1, l_bound + 1)) + list(range(-1, -l_bound - 1, -1))
    if isinstance(alpha, Surd) and isinstance(rho, Fraction):
        return None  # l/alpha is irrational for l != 0
    exact = isinstance(alpha, (Fraction, Surd)) and isinstance(rho, (Fraction, Surd))
    if exact:
        try:
            for l in order:
                k = l / alpha - rho
                if isinstance(k, Fraction) and k.denominator == 1 and abs(k) <= k_bound:
                    return int(k), l
            return None
        except DomainError:
            exact = False  # surds with different radicands
    a, r = to_mpf(alpha), to_mpf(rho)
    for l in order:
        v = l / a - r
        k = int(mp.nint(v))
        if abs(k) <= k_bound and abs(v - k) < tol:
            return k, l
    return None


def set_C(params: StableParams, search_bound: int = 10):
    """Points of C(alpha) as (l, {l/alpha}).

    Exact rational alpha = m/n: the finite set {j/m}, each with its
    smallest positive l.  Otherwise all 1 <= |l| <= search_bound, sorted
    by the fractional part.
    """
    mn = params.alpha_rational
    if mn is not None:
        m, n = mn
        out = []
        for j in range(1, m):
            l = next(l for l in range(1, m + 1) if (l * n) % m == j)
            out.append((l, Fraction(j, m)))
        return out
    a = params.alpha
    pts = []
    for l in list(range(1, search_bound + 1)) + list(range(-search_bound, 0)):
        v = l / a
        pts.append((l, v - math.floor(v) if isinstance(v, (Fraction, Surd)) else v - mp.floor(v)))
    return sorted(pts, key=lambda t: float(t[1]))


def curves(N: int, alpha_range=(0.0, 2.0), rho_range=(0.0, 1.0), n_alpha: int = 400):
    """Sample points (alpha, l, {l/alpha}) of the curves rho = {l/alpha}, 1 <= |l| <= N."""
    a_lo, a_hi = max(alpha_range[0], 1e-3), alpha_range[1]
    r_lo, r_hi = rho_range
    if a_lo >= a_hi or r_lo >= r_hi:
        return []
    alphas = np.linspace(a_lo, a_hi, n_alpha)
    alphas = alphas[np.abs(alphas - 1) > 1e-12]
    rows = []
    for l in list(range(-N, 0)) + list(range(1, N + 1)):
        v = l / alphas
        frac = v - np.floor(v)
        keep = (frac > r_lo) & (frac < r_hi)
        rows.extend((float(a), l, float(f)) for a, f in zip(alphas[keep], frac[keep]))
    return rows


# B(alpha) ----------------------------------------------------------------------

def test_B_alpha(alpha, rho, n_max: int = 10_000, window=None) -> MembershipVerdict:
    """Witnesses n with ||alpha rho + n alpha|| < n^(-ln ln(1+n)).

    For n <= 4 the right-hand side exceeds 1/2, so the inequality holds
    trivially; the verdict is therefore based on the window
    [max(5, n_max // 2), n_max] (override with ``window``).  All
    witnesses n <= n_max are listed.
    """
    if n_max < 2:
        raise DomainError("n_max must be >= 2")
    alpha, rho = as_real(alpha), as_real(rho)
    lo, hi = window or (max(5, n_max // 2), n_max)
    witnesses = []
    exact = isinstance(alpha, Fraction) and isinstance(rho, Fraction)
    if exact:
        for n in range(1, n_max + 1):
            d = dist_to_int(alpha * (rho + n))
            if d < _b_threshold(n):
                witnesses.append(n)
    else:
        with mp.workdps(max(mp.dps, 30)):
            a, r = to_mpf(alpha), to_mpf(rho)
            base = a * r
            for n in range(1, n_max + 1):
                v = base + n * a
                d = abs(v - mp.nint(v))
                if d < _b_threshold(n):
                    witnesses.append(n)
    in_window = [n for n in witnesses if lo <= n <= hi]
    return MembershipVerdict(
        set="B_alpha", verdict=WITNESSED if in_window else NO_WITNESS,
        witness=witnesses or None, checked_up_to=n_max,
        note=f"verdict from window [{lo}, {hi}]; n <= 4 holds trivially")


def _b_threshold(n: int) -> float:
    return n ** (-math.log(math.log(1 + n)))


# inhomogeneous approximation ---------------------------------------------------

def inhom_approx(alpha, rho, q_bound: int):
    """l with 1 <= |l| <= q_bound minimising |rho - {l/alpha}| (bounded search).

    Returns (l, {l/alpha}, error).  A vectorised float scan picks
    candidates which are then re-ranked at working precision.
    """
    alpha, rho = as_real(alpha), as_real(rho)
    if isinstance(alpha, Fraction):
        raise DomainError("inhom_approx needs an irrational alpha")
    if q_bound < 1:
        raise DomainError("q_bound must be >= 1")
    a_f, r_f = float(alpha), float(rho)
    ls = np.concatenate([np.arange(1, q_bound + 1), -np.arange(1, q_bound + 1)])
    v = ls / a_f
    err = np.abs(r_f - (v - np.floor(v)))
    cand = ls[np.argsort(err, kind="stable")[:8]]
    best = None
    a, r = to_mpf(alpha), to_mpf(rho)
    for l in cand:
        w = int(l) / a
        f = w - mp.floor(w)
        e = abs(r - f)
        if best is None or e < best[2] or (e == best[2] and abs(int(l)) < abs(best[0])):
            best = (int(l), f, e)
    return best


# divergence witness -------------------------------------------------------------

@dataclass
class DivergenceWitness:
    q: int
    level: int
    log_lower_bound: object  # ln of the rigorous lower bound for |a_{0,q} x^q|
    exceeds_one: bool
    log_crude_bound: object  # ln of the (2q)! form of the same estimate
    x: object

    @property
    def lower_bound(self):
        return mp.exp(self.log_lower_bound)

    def decimal(self, digits: int = 15) -> str:
        """The lower bound as a decimal string, e.g. '3.2e+91234567'."""
        if self.log_lower_bound == mp.ninf:
            return "0"
        log10 = self.log_lower_bound / mp.log(10)
        e = int(mp.floor(log10))
        mant = mp.power(10, log10 - e)
        return f"{mp.nstr(mant, digits)}e{e:+d}"

    def to_dict(self):
        return {"q": str(self.q), "level": self.level,
                "log_lower_bound": mp.nstr(self.log_lower_bound, 20),
                "lower_bound": self.decimal(), "exceeds_one": self.exceeds_one,
                "log_crude_bound": mp.nstr(self.log_crude_bound, 20), "x": str(self.x)}


def _log_dist_sum(p: int, q: int, rho: Fraction, count: int, slack: Fraction):
    """sum_{j=1..count} ln(2 (||(p/q)(rho+j-1)|| - slack)) and the smallest distance.

    (p/q)(rho + j - 1) = p (N + (j-1) D) / (q D) with rho = N/D, reduced
    modulo q D in integer arithmetic.
    """
    N, D = rho.numerator, rho.denominator
    mod = q * D
    if mod > 3_000_000_000:
        raise ResourceError(f"modulus {mod} too large for the vectorised residue scan")
    total = 0.0
    comp = 0.0
    min_num = mod
    chunk = 1 << 22
    p_mod = p % mod
    for start in range(0, count, chunk):
        j = np.arange(start, min(start + chunk, count), dtype=np.int64)
        t = (N + j * D) % mod
        r = (p_mod * t) % mod
        num = np.minimum(r, mod - r)
        min_num = min(min_num, int(num.min()))
        d = num.astype(np.float64) / mod - float(slack)
        if np.any(d <= 0):
            return None, 0
        # Kahan-style accumulation of a long sum of logs
        part = float(np.sum(np.log(2 * d)))
        y = part - comp
        s = total + y
        comp = (s - total) - y
        total = s
    return total, Fraction(min_num, mod)


def divergence_witness(cf: ContinuedFraction, rho, x=1, level: int | None = None,
                       max_q: int = 200_000_000) -> DivergenceWitness:
    """Rigorous lower bound for |a_{0,q} x^q| at q = q_level of alpha = cf.

    Uses the exact reflection form

        |a_{0,q}| = sin(pi rho)/pi Gamma(rho+q)/Gamma(alpha(rho+q))
                    prod_j |sin(pi alpha(rho+j-1))| / prod_i |sin(pi alpha i)|

    with |sin(pi z)| >= 2||z||, |sin(pi alpha i)| <= 1 for i < q,
    |sin(pi alpha q)| <= pi ||alpha q|| < pi / q_{level+1}, alpha below
    p/q + 1/q^2 inside Gamma, and the distances ||alpha(rho+j-1)||
    computed exactly from the convergent p/q up to a rigorous slack.
    The cruder (2q)! form of the estimate is reported alongside.
    """
    if cf.terminated:
        raise DomainError("alpha must be irrational (non-terminating continued fraction)")
    rho = as_real(rho)
    if not isinstance(rho, Fraction):
        raise DomainError("divergence_witness needs an exactly rational rho")
    if not 0 < rho < 1:
        raise DomainError("rho must lie in (0, 1)")
    level = cf.depth if level is None else level
    if not 1 <= level <= cf.depth:
        raise DomainError(f"level must be in 1..{cf.depth}")
    p, q = cf.convergents[level]
    if not 1 < cf.fraction() < 2:
        raise DomainError("alpha must lie in (1, 2); shift the construction first")
    if q > max_q:
        raise ResourceError(f"q = {q} exceeds the budget {max_q}")
    x = as_real(x)
    with mp.workdps(40):
        log_q_next = log_q_next_lower(cf, level)
        # |alpha - p/q| < 1/(q q_next); the j-th argument moves by < (rho+q)/(q q_next)
        slack_log = mp.log(rho + q) - mp.log(q) - log_q_next
        # below float resolution the slack is dominated by the rounding allowance
        slack = Fraction(0) if slack_log < -700 else Fraction(str(mp.nstr(mp.exp(slack_log) * 2, 20)))
        log_sines, min_dist = _log_dist_sum(p, q, rho, q, slack)
        if log_sines is None:
            return DivergenceWitness(q, level, mp.ninf, False, mp.ninf, x)
        # relative rounding of a float64 sum of q logs
        log_sines = mp.mpf(log_sines) - q * 1e-12 * (1 + abs(log_sines) / q)
        r = to_mpf(rho)
        alpha_hi = mp.mpf(p) / q + mp.mpf(1) / q ** 2
        common = mp.log(mp.sinpi(r) / mp.pi) + q * mp.log(to_mpf(x)) - mp.log(mp.pi) + log_q_next
        log_bound = common + mp.loggamma(r + q) - mp.loggamma(alpha_hi * (r + q)) + log_sines
        # crude form: Gamma(rho+q) > 1, Gamma(alpha(rho+q)) < (2q)!, |sin| >= ||.||
        log_crude = (common - mp.loggamma(2 * q + 1) + log_sines - q * mp.log(2))
    return DivergenceWitness(q, level, log_bound, bool(log_bound > 0), log_crude, x)
