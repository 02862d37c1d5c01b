"""
Error diagnostics of a histogram against a known density.

``distribution`` arguments are scipy frozen continuous distributions (or
anything exposing ``pdf`` and ``cdf``). Integrals are taken over the
histogram's span only; mass of the density outside the span is ignored by
the divergence and counted by the squared error.
"""
import logging
import math
from typing import Optional

import numpy as np
from scipy import integrate

from apps.core.conf import mfdea_setting
from apps.core.exceptions import ConfigurationError

from .types import Histogram

logger = logging.getLogger(__name__)

# bin probability below which a density is treated as having no mass there
MASS_FLOOR = 1e-15


def discrete_renyi_divergence(p, p_hat, q: float) -> float:
    """
    D_q(p || p_hat) = 1/(q-1) ln sum_k p_hat_k^(1-q) p_k^q for two
    distributions on the same bins; Kullback-Leibler at q = 1.

    Returns +inf when p_hat vanishes on a bin where p has mass.
    """
    p = np.asarray(p, dtype=float)
    p_hat = np.asarray(p_hat, dtype=float)
    if p.shape != p_hat.shape:
        raise ConfigurationError('Distributions must share bins', details={'p': p.shape, 'p_hat': p_hat.shape})
    if q <= 0:
        raise ConfigurationError('Divergence order must be positive', details={'q': q})

    support = p > MASS_FLOOR
    if np.any(p_hat[support] <= 0):
        return math.inf

    p, p_hat = p[support], p_hat[support]
    if abs(q - 1.0) < mfdea_setting('SHANNON_TOLERANCE'):
        return float(np.sum(p * np.log(p / p_hat)))
    log_terms = (1.0 - q) * np.log(p_hat) + q * np.log(p)
    return float(np.logaddexp.reduce(log_terms) / (q - 1.0))


def _bin_integral(function, lower: float, upper: float) -> float:
    value, _ = integrate.quad(function, lower, upper, limit=200)
    return value


def renyi_divergence(distribution, hist: Histogram, q: float) -> float:
    """
    D_q(p || p_hat) = 1/(q-1) ln int p_hat^(1-q) p^q over the histogram span.

    On bin k the histogram is the constant p_hat_k / h, so each bin adds
    (p_hat_k / h)^(1-q) int_k p^q.
    """
    if q <= 0:
        raise ConfigurationError('Divergence order must be positive', details={'q': q})

    edges = hist.edges
    heights = hist.densities
    masses = np.diff(distribution.cdf(edges))
    if np.any((heights <= 0) & (masses > MASS_FLOOR)):
        logger.debug('Empty bin under density mass; divergence is infinite')
        return math.inf

    occupied = np.flatnonzero(heights > 0)
    if abs(q - 1.0) < mfdea_setting('SHANNON_TOLERANCE'):
        total = 0.0
        for k in occupied:
            lower, upper = edges[k], edges[k + 1]
            entropy_part = _bin_integral(lambda x: _xlogx(distribution.pdf(x)), lower, upper)
            total += entropy_part - masses[k] * math.log(heights[k])
        return total

    log_terms = []
    for k in occupied:
        lower, upper = edges[k], edges[k + 1]
        power_mass = _bin_integral(lambda x: distribution.pdf(x) ** q, lower, upper)
        if power_mass <= 0:
            continue
        log_terms.append((1.0 - q) * math.log(heights[k]) + math.log(power_mass))
    if not log_terms:
        return math.inf
    return float(np.logaddexp.reduce(log_terms) / (q - 1.0))


def _xlogx(value: float) -> float:
    return value * math.log(value) if value > 0 else 0.0


def integrated_squared_error(hist: Histogram, distribution, density_square_integral: Optional[float] = None) -> float:
    """
    Exact int (p_hat - p)^2 over the real line.

    Expands bin-wise as sum_k (c_k^2 h - 2 c_k P_k) + int p^2, with c_k the
    bin height and P_k the density mass of bin k.
    """
    heights = hist.densities
    masses = np.diff(distribution.cdf(hist.edges))
    if density_square_integral is None:
        density_square_integral, _ = integrate.quad(lambda x: distribution.pdf(x) ** 2, -np.inf, np.inf)
    cross = float(np.sum(heights * heights * hist.width - 2.0 * heights * masses))
    return cross + density_square_integral


def gaussian_square_integral(sigma: float) -> float:
    """int p^2 for a normal density: 1 / (2 sqrt(pi) sigma)."""
    return 1.0 / (2.0 * math.sqrt(math.pi) * sigma)
