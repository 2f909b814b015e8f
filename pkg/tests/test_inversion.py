import numpy as np
import pytest
from mpmath import mp

from stable_extrema.errors import DomainError
from stable_extrema.inversion import (QuadConfig, cdf, cdf_mellin, head_mass, invert_mellin,
                                      mass_check, mellin_samples, survival_shift)
from stable_extrema.mellin import mellin_rational
from stable_extrema.params import StableParams

REF = StableParams("3/2", "3/5")
NEG = StableParams("3/2", "2/3")  # spectrally negative: S_1 = tau_1^(-1/alpha)


def neg_mellin(s, alpha=mp.mpf(3) / 2):
    """E S_1^(s-1) when S_1^(-alpha) is positive (1/alpha)-stable with exponent q^(1/alpha)."""
    return mp.gamma(s) / mp.gamma(1 + (s - 1) / alpha)


def neg_density(x):
    f = lambda u: (neg_mellin(1 + 1j * u) * mp.exp(-1j * u * mp.log(x))).real
    return mp.quad(f, mp.linspace(0, 60, 61)) / (mp.pi * x)


@pytest.fixture(scope="module")
def ref_samples():
    return mellin_samples(REF)


def test_spectrally_negative_mellin_closed_form():
    for s in (mp.mpc(1, 2), mp.mpc("0.8", "0.5"), mp.mpc("2.1", 7)):
        v = mellin_rational(NEG, s).value
        assert abs(v - neg_mellin(s)) < 1e-12 * abs(neg_mellin(s))


def test_spectrally_negative_density_oracle():
    xs = np.array([0.3, 1.0, 2.5])
    got = invert_mellin(NEG, xs).ps
    for x, g in zip(xs, got):
        assert abs(g - float(neg_density(x))) < 1e-7


def test_samples_shape(ref_samples):
    u, f = ref_samples
    assert u[0] == 0 and f[0] == 1
    assert abs(f[-1]) < 1e-10
    # smooth on the grid: second differences tiny relative to the values
    assert np.max(np.abs(np.diff(f, 2))) < 1e-2


def test_reference_density_positive_and_normalised(ref_samples):
    out = mass_check(REF, samples=ref_samples)
    assert abs(out["total"] - 1) < 1e-4
    assert out["min_density"] > 0


def test_one_sided_case_nonnegative():
    # density ~ x^(alpha rho - 1) is singular at 0, so refine the u-grid
    curve = invert_mellin(StableParams("3/2", "1/3"), cfg=QuadConfig(panels=3200))
    assert curve.ps.min() >= -1e-8


def test_panel_refinement(ref_samples):
    xs = np.linspace(0.2, 5, 25)
    fine = invert_mellin(REF, xs, samples=ref_samples).ps
    coarse_cfg = QuadConfig(panels=800)
    coarse = invert_mellin(REF, xs, coarse_cfg).ps
    assert np.max(np.abs(fine - coarse)) < 1e-5


def test_cdf_contours_agree():
    xs = np.array([0.5, 0.9, 1.1, 2.0])
    low = cdf_mellin(REF, xs)
    high = cdf_mellin(REF, xs, c=survival_shift(REF))
    assert np.max(np.abs(low - high)) < 1e-7


def test_cdf_properties_and_density_link(ref_samples):
    xs = np.geomspace(0.05, 1000, 60)
    F = cdf(REF, xs)
    assert np.all(np.diff(F) > 0)
    assert 0 < F[0] < 0.05 and 1 - F[-1] < 1e-3
    h = 1e-3
    dF = (cdf(REF, [2 + h]) - cdf(REF, [2 - h])) / (2 * h)
    assert abs(dF[0] - invert_mellin(REF, [2.0], samples=ref_samples).ps[0]) < 1e-6


def test_cdf_small_x_against_series_head():
    with mp.workdps(34):
        head = float(head_mass(REF, 0.05))
    assert abs(cdf(REF, [0.05])[0] - head) < 1e-5


def test_cdf_contour_domain():
    with pytest.raises(DomainError):
        cdf_mellin(REF, [1.0], c=0.05)
    with pytest.raises(DomainError):
        cdf_mellin(REF, [1.0], c=1.0)
    with pytest.raises(DomainError):
        invert_mellin(REF, [0.0, 1.0])
