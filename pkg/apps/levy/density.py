"""
Density and distribution function of symmetric stable laws.

L_{s,mu}(x) = 1/pi int_0^inf cos(kx) exp(-s k^mu) dk. Every evaluation is
reduced to the unit law at y = |x| / s^(1/mu):

* mu = 2 and mu = 1 use the Gaussian and Cauchy closed forms;
* far tails use the power series in y^-(mu k + 1), convergent for mu < 1
  and asymptotic (truncated at its smallest term) for mu > 1;
* everything else is integrated numerically. The integral is cut at K with
  exp(-K^mu) = CHAR_CUTOFF; up to the first quarter period the substitution
  u = k^mu removes the cusp at k = 0, and the oscillatory remainder goes to
  QUADPACK's cosine-weighted rule.
"""
import logging
import math
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.special import gamma, gammaln

from apps.core.conf import mfdea_setting
from apps.core.exceptions import QuadratureError

from .types import StableParams

logger = logging.getLogger(__name__)

# below these standardized abscissae the tail series is not used
SERIES_FROM_SUBCAUCHY = 2.0
SERIES_FROM_SUPERCAUCHY = 20.0
SERIES_TERMS = 200
# a quadrature reporting trouble is accepted while its error estimate stays below this
QUAD_FAILURE_TOL = 1e-7


def _quad(function: Callable, lower: float, upper: float, **kwargs) -> float:
    result = integrate.quad(
        function, lower, upper,
        epsabs=mfdea_setting('QUAD_ABS_TOL'),
        epsrel=mfdea_setting('QUAD_REL_TOL'),
        limit=mfdea_setting('QUAD_LIMIT'),
        full_output=1,
        **kwargs,
    )
    value, error = result[0], result[1]
    if len(result) > 3 and error > QUAD_FAILURE_TOL * max(1.0, abs(value)):
        raise QuadratureError(
            'Stable density quadrature did not converge',
            details={'lower': lower, 'upper': upper, 'error': error, 'message': result[3]},
        )
    return value


def _cutoff(mu: float) -> float:
    return (-math.log(mfdea_setting('CHAR_CUTOFF'))) ** (1.0 / mu)


def peak_density(mu: float) -> float:
    """Unit-law density at the origin, Gamma(1 + 1/mu) / pi."""
    return gamma(1.0 + 1.0 / mu) / math.pi


def tail_coefficient(mu: float) -> float:
    """c in L_{1,mu}(y) ~ c y^-(1+mu) for large y (zero for the Gaussian)."""
    return gamma(mu + 1.0) * math.sin(math.pi * mu / 2.0) / math.pi


def _unit_quadrature_pdf(y: float, mu: float) -> float:
    if y == 0:
        return peak_density(mu)
    limit = _cutoff(mu)
    split = min(limit, math.pi / (2.0 * y))
    inv = 1.0 / mu
    head = _quad(
        lambda u: math.cos(y * u ** inv) * math.exp(-u) * u ** (inv - 1.0) * inv,
        0.0, split ** mu,
    )
    tail = 0.0
    if split < limit:
        tail = _quad(lambda k: math.exp(-k ** mu), split, limit, weight='cos', wvar=y)
    return max((head + tail) / math.pi, 0.0)


def _series_terms(y: float, mu: float, cumulative: bool) -> float:
    k = np.arange(1, SERIES_TERMS + 1, dtype=float)
    # density terms Gamma(mu k + 1) / k!, survival terms Gamma(mu k) / k!
    log_gamma = gammaln(mu * k) if cumulative else gammaln(mu * k + 1.0)
    power = mu * k if cumulative else mu * k + 1.0
    log_magnitude = log_gamma - gammaln(k + 1.0) - power * math.log(y)
    if mu > 1.0:
        # asymptotic: stop at the smallest term
        rising = np.flatnonzero(np.diff(log_magnitude) > 0)
        if rising.size:
            k, log_magnitude = k[:rising[0] + 1], log_magnitude[:rising[0] + 1]
    signs = np.where(k % 2 == 1, 1.0, -1.0) * np.sin(math.pi * mu * k / 2.0)
    return float(np.sum(signs * np.exp(log_magnitude)) / math.pi)


def _series_applies(y: float, mu: float) -> bool:
    if mu < 1.0:
        return y >= SERIES_FROM_SUBCAUCHY
    return mu < 2.0 and y >= SERIES_FROM_SUPERCAUCHY


def unit_pdf(y: float, mu: float) -> float:
    """Density of the unit law (scale 1) at y."""
    y = abs(float(y))
    if mu == 2.0:
        return math.exp(-y * y / 4.0) / math.sqrt(4.0 * math.pi)
    if mu == 1.0:
        return 1.0 / (math.pi * (1.0 + y * y))
    if _series_applies(y, mu):
        return max(_series_terms(y, mu, cumulative=False), 0.0)
    return _unit_quadrature_pdf(y, mu)


def stable_pdf(x, params: StableParams):
    """
    L_{s,mu}(x) for a scalar or an array of abscissae.
    """
    width = params.width
    values = np.asarray(x, dtype=float)
    if values.ndim == 0:
        return unit_pdf(float(values) / width, params.mu) / width
    density = np.fromiter((unit_pdf(v / width, params.mu) for v in values.ravel()), float, values.size)
    return density.reshape(values.shape) / width


def quadrature_pdf(x, params: StableParams):
    """
    The numerical cosine integral alone, without closed forms or series.
    """
    width = params.width
    values = np.asarray(x, dtype=float)
    density = np.fromiter(
        (_unit_quadrature_pdf(abs(v) / width, params.mu) for v in values.ravel()), float, values.size,
    )
    density = density.reshape(values.shape) / width
    return float(density) if values.ndim == 0 else density


def _unit_survival(y: float, mu: float) -> float:
    """P(X > y) for y > 0 on the unit law."""
    if mu == 2.0:
        return 0.5 * math.erfc(y / 2.0)
    if mu == 1.0:
        return 0.5 - math.atan(y) / math.pi
    if _series_applies(y, mu):
        return _series_terms(y, mu, cumulative=True)
    # F(y) - 1/2 = 1/pi int_0^K sin(ky)/k exp(-k^mu) dk
    limit = _cutoff(mu)
    split = min(limit, math.pi / (2.0 * y))
    inv = 1.0 / mu
    head = _quad(
        lambda u: math.sin(y * u ** inv) * math.exp(-u) / u * inv,
        0.0, split ** mu,
    )
    tail = 0.0
    if split < limit:
        tail = _quad(lambda k: math.exp(-k ** mu) / k, split, limit, weight='sin', wvar=y)
    return 0.5 - (head + tail) / math.pi


def stable_cdf(x, params: StableParams) -> float:
    """
    P(X <= x) by sine-transform inversion, with the integrated tail series
    far out.
    """
    y = float(x) / params.width
    if y == 0:
        return 0.5
    survival = _unit_survival(abs(y), params.mu)
    return 1.0 - survival if y > 0 else survival
