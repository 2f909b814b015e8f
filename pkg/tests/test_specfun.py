import math
import random

import pytest
from mpmath import mp

from stable_extrema.errors import DomainError, PoleError
from stable_extrema.specfun import (_li2_logseries, _li2_reflection, dilog, h_mn, log_gamma,
                                    log_h_mn, q_pochhammer_mod, zeta_minus_one)

DPS = 34


@pytest.fixture(autouse=True)
def _precision():
    with mp.workdps(DPS):
        yield


def raw_li2(z, terms=4000):
    """Plain power series, summed until the terms vanish (oracle for |z| < 0.9)."""
    total, power = mp.mpc(0), mp.mpc(1)
    for k in range(1, terms):
        power *= z
        t = power / (k * k)
        total += t
        if abs(t) < mp.mpf(10) ** (-DPS - 5):
            break
    return total


def stirling_loggamma(z, shift):
    """ln Gamma via the recurrence up to z + shift and a fixed Stirling series."""
    z = mp.mpc(z)
    acc = mp.mpc(0)
    for k in range(shift):
        acc += mp.log(z + k)
    w = z + shift
    s = (w - mp.mpf(1) / 2) * mp.log(w) - w + mp.log(2 * mp.pi) / 2
    for j in range(1, 30):
        b = mp.bernoulli(2 * j)
        s += b / (2 * j * (2 * j - 1) * w ** (2 * j - 1))
    return s - acc


# dilogarithm ---------------------------------------------------------------

def test_dilog_zero():
    assert dilog(0) == 0


def test_dilog_half():
    expected = mp.pi ** 2 / 12 - mp.log(2) ** 2 / 2
    assert abs(dilog(mp.mpf(1) / 2) - expected) < mp.mpf(10) ** -32


def test_dilog_minus_one_alternating_series():
    # alternating series with Euler transform via mpmath nsum as the oracle
    oracle = mp.nsum(lambda k: (-1) ** k / k ** 2, [1, mp.inf])
    assert abs(dilog(-1) - oracle) < mp.mpf(10) ** -30
    assert abs(dilog(-1) + mp.pi ** 2 / 12) < mp.mpf(10) ** -32


def test_dilog_duplication_at_point_three():
    z = mp.mpf("0.3")
    assert abs(dilog(z) + dilog(-z) - dilog(z * z) / 2) < mp.mpf(10) ** -32


@pytest.mark.parametrize("z", [0.2 + 0.1j, 0.6 - 0.3j, -0.9 + 0.2j, 0.95j, 0.7 + 0.69j,
                               "unit:0.8", "unit:-0.05"])
def test_dilog_matches_polylog(z):
    if isinstance(z, str):
        z = mp.expjpi(mp.mpf(z.split(":")[1]))
    assert abs(dilog(z) - mp.polylog(2, z)) < mp.mpf(10) ** -30


def test_dilog_raw_series_region():
    rng = random.Random(7)
    for _ in range(30):
        r, t = 0.85 * rng.random(), 2 * math.pi * rng.random()
        z = mp.mpc(r * math.cos(t), r * math.sin(t))
        assert abs(dilog(z) - raw_li2(z)) < mp.mpf(10) ** -31


def test_dilog_rejects_cut_and_outside():
    with pytest.raises(DomainError):
        dilog(2)
    with pytest.raises(DomainError):
        dilog(1.5j)


def test_regime_consistency_on_overlap_annulus():
    rng = random.Random(11)
    checked = 0
    while checked < 40:
        r = 1 / 20 + (1 / 10 - 1 / 20) * rng.random()
        t = 2 * math.pi * rng.random()
        z = 1 - mp.mpc(r * math.cos(t), r * math.sin(t))
        if abs(z) > 1:
            continue
        assert abs(_li2_reflection(z) - _li2_logseries(z)) < mp.mpf(10) ** -30
        checked += 1


def test_log_series_term_bound():
    # n-th term zeta-part: 4^n (zeta(2n)-1)/(2n+1) |x|^n <= 3 (r/4)^n; on |1-z| >= 1/20,
    # |z| <= 1 the ratio r/4 is at most 1/20, so the tail after N terms is below
    # 3 * sum_{k>N} 20^-k
    zm1 = zeta_minus_one(60)
    for n in range(1, 61):
        assert 4 ** n * zm1[n - 1] < 3
    for z in [mp.mpc(-1, 0), mp.expjpi(mp.mpf("0.5")), mp.mpc("0.96", "0.2")]:
        w = mp.log(1 - z)
        ratio = abs(w / (2 * mp.pi)) ** 2 / 4
        assert ratio < mp.mpf(1) / 20
        x = (w / (2 * mp.pi)) ** 2
        for N in (5, 10, 20):
            tail = sum(abs(zm1[n - 1] / (2 * n + 1) * x ** n) for n in range(N + 1, 61))
            bound = 3 * sum(mp.mpf(20) ** (-k) for k in range(N + 1, 200))
            assert tail < bound


def test_zeta_minus_one_values():
    vals = zeta_minus_one(5)
    for n, v in enumerate(vals, start=1):
        assert abs(v - (mp.zeta(2 * n) - 1)) < mp.mpf(10) ** -33


# identities over roots of unity ------------------------------------------------

def _coprime_pairs(rng, count):
    out = []
    while len(out) < count:
        m, n = rng.randint(1, 12), rng.randint(1, 12)
        if math.gcd(m, n) == 1:
            out.append((m, n))
    return out


def _random_z(rng):
    r, t = 0.95 * math.sqrt(rng.random()), 2 * math.pi * rng.random()
    return mp.mpc(r * math.cos(t), r * math.sin(t))


def test_root_of_unity_product_identity():
    rng = random.Random(2024)
    for m, n in _coprime_pairs(rng, 200):
        z = _random_z(rng)
        prod = mp.mpc(1)
        for k in range(n):
            prod *= 1 - z * mp.expjpi(mp.mpf(2 * k * m) / n)
        assert abs(prod - (1 - z ** n)) < mp.mpf(10) ** -28


def test_dilog_distribution_identity():
    rng = random.Random(2025)
    for m, n in _coprime_pairs(rng, 200):
        z = _random_z(rng)
        lhs = mp.fsum(dilog(z * mp.expjpi(mp.mpf(2 * k * m) / n)) for k in range(n))
        assert abs(lhs - dilog(z ** n) / n) < mp.mpf(10) ** -28


# Gamma ----------------------------------------------------------------------

def test_log_gamma_values():
    assert abs(log_gamma(1)) < mp.mpf(10) ** -33
    assert abs(log_gamma(mp.mpf(1) / 2) - mp.log(mp.sqrt(mp.pi))) < mp.mpf(10) ** -33


@pytest.mark.parametrize("z", [mp.mpf("3.7"), mp.mpc("0.4", "2.5"), mp.mpc("-2.3", "0.7")])
def test_log_gamma_against_shifted_stirling(z):
    a = stirling_loggamma(z, 40)
    b = stirling_loggamma(z, 60)
    assert abs(a - b) < mp.mpf(10) ** -30
    # compare modulo 2 pi i (branch of the summed logs differs from the principal one)
    d = log_gamma(z) - a
    k = mp.nint(d.imag / (2 * mp.pi))
    assert abs(d - 2j * mp.pi * k) < mp.mpf(10) ** -30


def test_log_gamma_pole():
    with pytest.raises(PoleError):
        log_gamma(-3)


# modified q-Pochhammer and H --------------------------------------------------

def test_q_pochhammer_trivial_cases():
    a, q = mp.mpc("0.3", "0.2"), mp.expjpi(mp.mpf("0.4"))
    assert q_pochhammer_mod(a, q, 1) == 1
    assert q_pochhammer_mod(0, q, 5) == 1
    assert abs(q_pochhammer_mod(a, q, 2) - mp.sqrt(1 - a * q)) < mp.mpf(10) ** -33


def test_q_pochhammer_direct_product():
    a, q, n = mp.mpc("0.5", "-0.1"), mp.expjpi(mp.mpf(2) / 7), 7
    direct = mp.mpc(1)
    for k in range(1, n):
        direct *= mp.exp(mp.mpf(k) / n * mp.log(1 - a * q ** k))
    assert abs(q_pochhammer_mod(a, q, n) - direct) < mp.mpf(10) ** -32


def test_q_pochhammer_domain():
    with pytest.raises(DomainError):
        q_pochhammer_mod(1.2, 0.5, 3)
    with pytest.raises(DomainError):
        q_pochhammer_mod(0.5, 0.5, 0)


def raw_h(m, n, s):
    """H_{m,n}(s) from the definition with the raw dilogarithm series."""
    z = mp.exp(2j * mp.pi * s)
    out = mp.exp(-raw_li2(z) / (2j * mp.pi * m * n)) * mp.exp((1 - s / (m * n)) * mp.log(1 - z))
    for k in range(1, m):
        out /= mp.exp(mp.mpf(k) / m * mp.log(1 - mp.exp(2j * mp.pi * (s + k * n) / m)))
    for k in range(1, n):
        out /= mp.exp(mp.mpf(k) / n * mp.log(1 - mp.exp(2j * mp.pi * (s + k * m) / n)))
    return out


def test_h_one_one():
    s = mp.mpc("0.3", "0.4")
    z = mp.exp(2j * mp.pi * s)
    expected = mp.exp(-mp.polylog(2, z) / (2j * mp.pi)) * (1 - z) ** (1 - s)
    assert abs(h_mn(1, 1, s) - expected) < mp.mpf(10) ** -30


def test_h_symmetric_in_m_n():
    s = mp.mpc("0.5", "0.5")
    assert abs(h_mn(3, 2, s) - h_mn(2, 3, s)) < mp.mpf(10) ** -30


@pytest.mark.parametrize("m,n,s", [(3, 2, mp.mpc("0.5", "0.5")), (5, 3, mp.mpc("2.25", "0.3")),
                                   (1, 4, mp.mpc("-0.7", "1.1"))])
def test_h_against_raw_series(m, n, s):
    v = h_mn(m, n, s)
    assert abs(v - raw_h(m, n, s)) < mp.mpf(10) ** -28 * abs(v)


def test_h_log_and_value_agree():
    s = mp.mpc("1.3", "0.2")
    assert abs(mp.exp(log_h_mn(3, 2, s)) - h_mn(3, 2, s)) < mp.mpf(10) ** -30


def test_h_domain():
    with pytest.raises(DomainError):
        log_h_mn(2, 4, mp.mpc(0.5, 0.5))
    with pytest.raises(DomainError):
        log_h_mn(3, 2, mp.mpc(0.5, -0.5))
