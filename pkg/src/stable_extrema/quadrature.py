"""Quadrature settings and the Filon rule for Fourier-type integrals.

Filon's method interpolates the slowly varying factor by a quadratic on
each double panel and integrates the oscillator exp(-i k u) exactly, so
the step size is dictated by the smoothness of the sampled function
alone, not by the frequency k.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError, QuadratureError


@dataclass(frozen=True)
class QuadConfig:
    """Quadrature settings shared by the Mellin inversion and the Darling integral.

    u_max, panels
        truncation point and number of (equal) subintervals of [0, u_max]
        for the Mellin inversion; ``panels`` must be even and >= 8.
    refinement_tolerance
        panel-halving check: results with the coarse and fine grid must
        agree to this absolute tolerance, otherwise QuadratureError.
    contour_shift
        real part c of the contour used for the CDF (must lie inside the
        strip where M is finite and below 1).
    darling_step, darling_t_min, darling_pad
        trapezoid step and range in the log-variable t = ln|u| of the
        Darling integral; the upper end is max(ln z, 0) + darling_pad.
    """

    u_max: float = 40.0
    panels: int = 1600
    refinement_tolerance: float = 1e-5
    filon_degree: int = 2
    contour_shift: float = 0.55
    darling_step: float = 0.05
    darling_t_min: float = -45.0
    darling_pad: float = 45.0

    def __post_init__(self):
        if not self.u_max > 0:
            raise DomainError("u_max must be positive")
        if self.panels < 8 or self.panels % 4:
            raise DomainError("panels must be >= 8 and divisible by 4")
        if not self.refinement_tolerance > 0:
            raise DomainError("refinement_tolerance must be positive")
        if self.filon_degree != 2:
            raise DomainError("only quadratic Filon interpolation is implemented")
        if not self.darling_step > 0:
            raise DomainError("darling_step must be positive")

    @property
    def step(self) -> float:
        return self.u_max / self.panels

    def u_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.u_max, self.panels + 1)

    def to_dict(self) -> dict:
        return asdict(self)


def _filon_moments(theta):
    """Scaled moments of exp(-i k v) over v in [-h, h]; theta = k h.

    int v**p exp(-i k v) dv = h**(p+1) * m_p(theta).
    """
    theta = np.asarray(theta, dtype=float)
    small = np.abs(theta) < 0.1
    t = np.where(small, 1.0, theta)  # avoid 0/0 in the unused branch
    s, c = np.sin(t), np.cos(t)
    m0 = 2 * s / t
    m1 = -2j * (s - t * c) / t ** 2
    m2 = 2 * ((t ** 2 - 2) * s + 2 * t * c) / t ** 3
    th2 = theta ** 2
    m0s = 2 * (1 - th2 / 6 + th2 ** 2 / 120 - th2 ** 3 / 5040)
    m1s = -2j * theta * (1 / 3 - th2 / 30 + th2 ** 2 / 840 - th2 ** 3 / 45360)
    m2s = 2 * (1 / 3 - th2 / 10 + th2 ** 2 / 168 - th2 ** 3 / 6480)
    return (np.where(small, m0s, m0), np.where(small, m1s, m1),
            np.where(small, m2s, m2))


def filon(f: np.ndarray, h: float, k, u0: float = 0.0) -> np.ndarray:
    """int_{u0}^{u0 + (len(f)-1) h} f(u) exp(-i k u) du for each k.

    ``f`` holds samples on the uniform grid (odd length); ``k`` may be an
    array of frequencies.  Returns a complex array shaped like ``k``.
    """
    f = np.asarray(f, dtype=complex)
    if f.ndim != 1 or len(f) < 3 or len(f) % 2 == 0:
        raise DomainError("Filon needs an odd number (>= 3) of samples")
    k = np.atleast_1d(np.asarray(k, dtype=float))
    fm, f0, fp = f[0:-1:2], f[1::2], f[2::2]
    centres = u0 + h * (2 * np.arange(len(f0)) + 1)
    A = f0
    B = (fp - fm) / (2 * h)
    C = (fp - 2 * f0 + fm) / (2 * h * h)
    phase = np.exp(-1j * np.outer(k, centres))
    m0, m1, m2 = _filon_moments(k * h)
    return h * m0 * (phase @ A) + h ** 2 * m1 * (phase @ B) + h ** 3 * m2 * (phase @ C)


def filon_checked(f: np.ndarray, h: float, k, tolerance: float, scale=1.0):
    """Filon on the full grid, checked against the half-resolution grid.

    ``scale`` (scalar or per-k array) converts the raw integral into the
    reported quantity before the tolerance comparison.  Returns
    ``(values, error_estimates)``.
    """
    f = np.asarray(f, dtype=complex)
    if (len(f) - 1) % 4:
        raise DomainError("panel-halving check needs a multiple of 4 subintervals")
    fine = filon(f, h, k)
    coarse = filon(f[::2], 2 * h, k)
    err = np.abs((fine - coarse) * scale)
    worst = float(np.max(err)) if err.size else 0.0
    if worst > tolerance:
        raise QuadratureError(f"Filon panel-halving difference {worst:.3e} exceeds "
                              f"tolerance {tolerance:.3e}; increase panels")
    return fine, err
