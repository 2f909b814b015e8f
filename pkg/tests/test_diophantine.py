import json
from fractions import Fraction

import pytest
from mpmath import mp

from stable_extrema import diophantine as dio
from stable_extrema.errors import DomainError, PrecisionExhausted
from stable_extrema.exact import parse_real, surd
from stable_extrema.params import StableParams

SQRT2 = surd(0, 1, 2)
GOLDEN = parse_real("1/2+sqrt(5)/2")


def a0n_true(alpha, rho, n):
    """|a_{0,n}| from the product definition, evaluated at high precision."""
    with mp.workdps(60):
        alpha = mp.mpf(alpha.numerator) / alpha.denominator
        rho = mp.mpf(rho.numerator) / rho.denominator
        v = 1 / (mp.gamma(1 - rho - n) * mp.gamma(alpha * rho + alpha * n))
        for j in range(1, n + 1):
            v *= mp.sin(mp.pi * alpha * (rho + j - 1)) / mp.sin(mp.pi * alpha * j)
        return mp.log(abs(v))


@pytest.fixture(scope="module")
def constructed():
    return dio.construct_L_tilde(2, "0.1", 3)


def test_sqrt2_expansion():
    cf = dio.cf_expand(SQRT2, 20)
    assert cf.a0 == 1 and cf.quotients == [2] * 20
    assert cf.determinant_ok()


def test_rational_expansion_terminates():
    cf = dio.cf_expand("355/113", 10)
    assert cf.terminated and cf.fraction() == Fraction(355, 113)
    assert dio.cf_expand("355/113", 10, canonical=True).quotients == [7, 16]


def test_pi_convergents_from_mpf():
    with mp.workdps(30):
        cf = dio.cf_expand(mp.pi, 4)
    assert [cf.fraction(n) for n in range(5)] == [3, Fraction(22, 7), Fraction(333, 106),
                                                  Fraction(355, 113), Fraction(103993, 33102)]


def test_mpf_precision_exhausted():
    with mp.workdps(15):
        with pytest.raises(PrecisionExhausted):
            dio.cf_expand(mp.sqrt(2), 40)
        partial = dio.cf_expand(mp.sqrt(2), 40, strict=False)
    assert partial.exhausted and 10 < partial.depth < 40


def test_json_round_trip(constructed):
    back = dio.ContinuedFraction.from_dict(json.loads(constructed.to_json()))
    assert back.quotients == constructed.quotients
    assert back.convergents == constructed.convergents
    assert back.construction == constructed.construction


def test_construction_and_verdict(constructed):
    assert constructed.quotients[:3] == [2, 4, 2756894]
    assert constructed.determinant_ok()
    verdict = dio.test_L_tilde(constructed, 2, 0.1)
    assert verdict.witnessed and len(verdict.witness) == 2  # q_0 = 1 is skipped
    for n in range(1, constructed.depth + 1):
        assert dio.alpha_q_distance_check(constructed, n, 2, 0.1)


@pytest.mark.parametrize("x", [SQRT2, GOLDEN])
def test_badly_approximable_numbers_not_witnessed(x):
    cf = dio.cf_expand(x, 30)
    assert not dio.test_L_tilde(cf, 2, 0.1).witnessed


def test_shift_and_reflect(constructed):
    s = constructed.shift(1)
    assert s.fraction() == 1 + constructed.fraction()
    r = constructed.reflect(2)
    assert r.fraction() == 2 - constructed.fraction()
    assert r.quotients[:4] == [1, 1, 4, 2756894]
    assert [r.q(n) for n in (2, 3, 4)] == [constructed.q(n) for n in (1, 2, 3)]
    assert r.determinant_ok()


def test_set_C_rational():
    assert dio.set_C(StableParams("3/2", "1/2")) == [(2, Fraction(1, 3)), (1, Fraction(2, 3))]
    pts = dio.set_C(StableParams("5/3", "1/2"))
    assert [f for _, f in pts] == [Fraction(j, 5) for j in range(1, 5)]


def test_set_C_irrational_count():
    pts = dio.set_C(StableParams(parse_real("3/2+sqrt(2)/50"), "3/5"), search_bound=7)
    assert len(pts) == 14
    assert all(0 <= float(f) < 1 for _, f in pts)


def test_doney_agrees_with_set_C():
    for rho in ("1/3", "2/3"):
        p = StableParams("3/2", rho)
        k, l = dio.doney_search(p)
        assert Fraction(rho) + k == Fraction(l) / p.alpha
        assert Fraction(rho) in [f for _, f in dio.set_C(p)]
    assert dio.doney_search(StableParams("3/2", "3/5")) is None


def test_B_alpha():
    # rational: alpha rho + n alpha hits an integer periodically
    assert dio.test_B_alpha(Fraction(3, 2), Fraction(2, 3), 200).witnessed
    assert not dio.test_B_alpha(Fraction(3, 2), Fraction(3, 5), 200).witnessed
    assert not dio.test_B_alpha(SQRT2, Fraction(1, 2), 2000).witnessed
    v = dio.test_B_alpha(SQRT2, Fraction(1, 2), 2000)
    assert all(n < 1000 for n in v.witness)  # only early, out-of-window hits


def test_inhom_approx():
    # rho = {3/alpha} is hit exactly by l = 3
    a = parse_real("3/2+sqrt(2)/50")
    with mp.workdps(40):
        l, f, err = dio.inhom_approx(a, 3 / a - 1, 10)
        assert l == 3 and err < mp.mpf(10) ** -35
    l, f, err = dio.inhom_approx(a, Fraction(3, 5), 50)
    assert 1 <= abs(l) <= 50 and err < 0.05
    with pytest.raises(DomainError):
        dio.inhom_approx(Fraction(3, 2), Fraction(1, 2), 10)


def test_witness_reflected_construction(constructed):
    w = dio.divergence_witness(constructed.reflect(2), "3/5")
    assert w.q == 24812048 and w.exceeds_one
    assert abs(w.log_lower_bound - mp.mpf("1.26021549e8")) < 1e3
    assert w.log_crude_bound < 0  # the (2q)! form is far too weak
    assert w.decimal(6).startswith("2.50751e+5473046")


def test_witness_bound_is_rigorous_at_small_q(constructed):
    r = constructed.reflect(2)
    w = dio.divergence_witness(r, "3/5", level=3)
    assert w.q == 9
    assert w.log_lower_bound <= a0n_true(r.fraction(), Fraction(3, 5), 9)
    s = constructed.shift(1)
    w = dio.divergence_witness(s, "3/5", level=2)
    assert w.log_lower_bound <= a0n_true(s.fraction(), Fraction(3, 5), w.q)


def test_witness_monotone_in_x(constructed):
    r = constructed.reflect(2)
    lows = [dio.divergence_witness(r, "3/5", x=x, level=3).log_lower_bound
            for x in (Fraction(1, 2), 1, 2)]
    assert lows[0] < lows[1] < lows[2]


def test_witness_rejects_rational_and_out_of_range(constructed):
    with pytest.raises(DomainError):
        dio.divergence_witness(dio.cf_expand("3/2", 5), "3/5")
    with pytest.raises(DomainError):
        dio.divergence_witness(constructed, "3/5")  # alpha in (0, 1)
    with pytest.raises(DomainError):
        dio.divergence_witness(constructed.reflect(2), mp.mpf("0.6"))


def test_curves_empty_range():
    assert dio.curves(3, alpha_range=(1.5, 1.5)) == []
    rows = dio.curves(2, n_alpha=20)
    assert rows and all(0 < f < 1 for _, _, f in rows)
