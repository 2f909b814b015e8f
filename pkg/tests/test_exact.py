import math
from fractions import Fraction

import pytest
from mpmath import mp

from stable_extrema.errors import DomainError
from stable_extrema.exact import (PRECISION_ENV, Surd, as_real, default_dps, dist_to_int,
                                  fractional_part, parse_real, surd, to_mpf)


def test_parse_rational_and_surd():
    assert parse_real("3/2") == Fraction(3, 2)
    a = parse_real("3/2+sqrt(2)/50")
    assert isinstance(a, Surd)
    assert abs(float(a) - (1.5 + math.sqrt(2) / 50)) < 1e-15
    assert parse_real("sqrt2") == surd(0, 1, 2)


def test_parse_decimal_warns_and_is_exact():
    with pytest.warns(UserWarning):
        v = parse_real("0.6")
    assert v == Fraction(3, 5)


def test_parse_rejects_junk():
    with pytest.raises(DomainError):
        parse_real("3/")
    with pytest.raises(DomainError):
        parse_real("__import__('os')")


def test_surd_simplifies():
    assert surd(1, 3, 4) == 7  # 1 + 3*2
    s = surd(0, 1, 8)
    assert s.radicand == 2 and s.coeff == 2


def test_surd_arithmetic_and_order():
    r2 = surd(0, 1, 2)
    assert r2 * r2 == 2
    assert (1 + r2) * (r2 - 1) == 1
    assert Fraction(141, 100) < r2 < Fraction(142, 100)
    assert math.floor(r2 + Fraction(1, 2)) == 1
    assert abs(float(1 / r2) - 1 / math.sqrt(2)) < 1e-15


def test_surd_fraction_and_distance():
    r2 = surd(0, 1, 2)
    f = fractional_part(10 * r2)
    with mp.workdps(40):
        expected = 10 * mp.sqrt(2) - 14
        assert abs(to_mpf(f) - expected) < mp.mpf(10) ** -35
    assert dist_to_int(Fraction(7, 3)) == Fraction(1, 3)


def test_to_mpf_respects_precision():
    with mp.workdps(50):
        v = to_mpf(surd(0, 1, 2))
        assert abs(v - mp.sqrt(2)) < mp.mpf(10) ** -48


def test_as_real_types():
    assert as_real(3) == Fraction(3)
    assert isinstance(as_real(0.25), mp.mpf)
    with pytest.raises(DomainError):
        as_real(True)


def test_precision_env(monkeypatch):
    monkeypatch.setenv(PRECISION_ENV, "50")
    assert default_dps() == 50
    monkeypatch.setenv(PRECISION_ENV, "5")
    with pytest.raises(DomainError):
        default_dps()
    monkeypatch.delenv(PRECISION_ENV)
    assert default_dps() == 34
