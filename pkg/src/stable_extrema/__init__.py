"""Density of the supremum of a strictly stable Levy process.

Two routes to p(x; alpha, rho), the density of S_1 = sup_{t<=1} X_t:

* rational alpha = m/n: the closed-form Mellin transform
  (:mod:`~stable_extrema.mellin`) inverted numerically
  (:mod:`~stable_extrema.inversion`);
* irrational alpha: the convergent and asymptotic double series
  (:mod:`~stable_extrema.series`), whose behaviour depends on the
  Diophantine properties of alpha (:mod:`~stable_extrema.diophantine`).

A Monte-Carlo oracle (:mod:`~stable_extrema.oracle_mc`) provides
assumption-light checks.
"""

__version__ = "0.1.0"

from .errors import (BranchError, DomainError, PoleError, PrecisionExhausted, QuadratureError,
                     RationalAlphaError, ResourceError, StableExtremaError)
from .exact import Surd, parse_real, surd
from .params import StableParams, beta_from_rho, classify, is_admissible, rho_from_beta
from .specfun import dilog, h_mn, log_gamma, log_h_mn, q_pochhammer_mod
from .mellin import mellin_batch, mellin_rational, mellin_real, moment_crosscheck, wh_factor
from .quadrature import QuadConfig
from .series import (CoeffTable, DensityCurve, coeff_a, coeff_b, coeff_table, density_series,
                     perturbation_average, series_mass)
from .inversion import cdf, invert_mellin, mass_check, mellin_samples
from .diophantine import (ContinuedFraction, cf_expand, construct_L_tilde, divergence_witness,
                          doney_search, test_B_alpha, test_L_tilde)
from .oracle_mc import McConfig, sample_stable, sample_sup, sample_sup_exp_time

__all__ = [name for name in dir() if not name.startswith("_")]
