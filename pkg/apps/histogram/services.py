"""
Histogram construction and q-dependent optimal bin-widths.

The q-th power of a histogram estimates p^q(x). Minimising the leading-order
mean integrated squared error of that estimate gives the classic optimal
width times a correction rho_q = q^(1/2) / (2q - 1)^(1/6). For several
histograms sharing one width (one per time scale) the summed error gives
the multi-histogram rules below.

The correction diverges as q -> 1/2 and the Gaussian error integrals do not
exist for q <= 1/2, so rho_q is clamped to 1 below 1/2 + RHO_CLAMP_MARGIN
and the caller is told through ``is_rho_clamped``.
"""
import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import logsumexp

from apps.core.conf import mfdea_setting
from apps.core.exceptions import (
    ConfigurationError, DataError, DegenerateEnsembleError, DivergentIntegralError,
)

from .types import BinWidthRule, EnsembleStats, Histogram, RuleKind

logger = logging.getLogger(__name__)

SCOTT_CONSTANT = 3.5
FD_CONSTANT = 2.6
# (24 sqrt(pi))^(1/3), the Gaussian q = 1 constant
GAUSSIAN_WIDTH_CONSTANT = (24.0 * math.sqrt(math.pi)) ** (1.0 / 3.0)

RHO_CLAMPED = 'rho-clamped'
MAX_BINS = 50_000_000


def _clamp_margin(margin: Optional[float]) -> float:
    return mfdea_setting('RHO_CLAMP_MARGIN') if margin is None else margin


def is_rho_clamped(q: float, margin: Optional[float] = None) -> bool:
    return q <= 0.5 + _clamp_margin(margin)


def rho(q: float, margin: Optional[float] = None) -> float:
    """
    q-correction to the optimal bin-width; exactly 1 at q = 1 and ~ q^(1/3)
    for large q. Returns 1 inside the clamp region.
    """
    if is_rho_clamped(q, margin):
        return 1.0
    if q == 1:
        return 1.0
    return math.sqrt(q) / (2.0 * q - 1.0) ** (1.0 / 6.0)


def amise(h: float, variance_coefficient: float, bias_coefficient: float) -> float:
    """
    Leading-order error V / h + B h^2 / 12.

    V = q^2 / N * int p^(2q-1), B = int (d p^q / dx)^2.
    """
    return variance_coefficient / h + bias_coefficient * h * h / 12.0


def minimize_amise(error: Callable[[float], float], scale_hint: float = 1.0) -> float:
    """
    Numerical minimiser of an error curve over h > 0.

    Golden-section search in log h, so the bracket only needs the order of
    magnitude of the answer.
    """
    start = math.log(scale_hint)
    result = minimize_scalar(
        lambda u: error(math.exp(u)),
        bracket=(start - 1.0, start + 1.0),
        method='golden',
        tol=1e-12,
    )
    return math.exp(result.x)


def amise_gaussian(h: float, q: float, sigma: float, n: int) -> float:
    """
    Leading-order error of the q-th power histogram for a normal density.
    """
    if q <= 0.5:
        raise DivergentIntegralError(
            'Gaussian error integrals need q > 1/2',
            details={'q': q},
        )
    if h <= 0 or sigma <= 0 or n <= 0:
        raise ConfigurationError('h, sigma and N must be positive', details={'h': h, 'sigma': sigma, 'N': n})
    # int p^(2q-1) = (2 pi sigma^2)^(1-q) / sqrt(2q-1)
    spread = (2.0 * math.pi * sigma * sigma) ** (1.0 - q) / math.sqrt(2.0 * q - 1.0)
    # int (p^q)'^2 = sqrt(q) 2^-(1+q) pi^(1/2-q) sigma^-(1+2q)
    roughness = math.sqrt(q) * 2.0 ** (-(1.0 + q)) * math.pi ** (0.5 - q) * sigma ** (-(1.0 + 2.0 * q))
    return amise(h, q * q * spread / n, roughness)


def optimal_width_single(sigma: float, n: int, q: float, margin: Optional[float] = None) -> float:
    """
    h*_q = sigma N^(-1/3) (24 sqrt(pi))^(1/3) rho_q.
    """
    if sigma <= 0:
        raise DegenerateEnsembleError('Standard deviation must be positive', details={'sigma': sigma})
    return sigma * n ** (-1.0 / 3.0) * GAUSSIAN_WIDTH_CONSTANT * rho(q, margin)


def _aggregate_spread(spreads: np.ndarray, counts: np.ndarray, q: float, label: str) -> float:
    """
    cbrt( sum_i w_i^(2(1-q)) / N_i  /  sum_i w_i^-(1+2q) ), evaluated in
    log space so large q does not overflow.
    """
    if spreads.size == 0:
        raise DegenerateEnsembleError('No scales to combine')
    if np.any(spreads <= 0):
        raise DegenerateEnsembleError(
            f'Zero {label} at some scale',
            details={label: spreads.tolist()},
        )
    log_spreads = np.log(spreads)
    numerator = logsumexp(2.0 * (1.0 - q) * log_spreads - np.log(counts))
    denominator = logsumexp(-(1.0 + 2.0 * q) * log_spreads)
    return math.exp((numerator - denominator) / 3.0)


def scott_multi(stats: EnsembleStats, q: float, margin: Optional[float] = None) -> float:
    """
    Shared width minimising the summed error over all scales, Scott form.
    """
    return SCOTT_CONSTANT * rho(q, margin) * _aggregate_spread(stats.sigmas, stats.counts, q, 'sigma')


def fd_multi(stats: EnsembleStats, q: float, margin: Optional[float] = None) -> float:
    """
    Freedman-Diaconis variant: interquartile ranges instead of sigma.
    """
    return FD_CONSTANT * rho(q, margin) * _aggregate_spread(stats.iqrs, stats.counts, q, 'iqr')


def scott_single(stats: EnsembleStats, q: float, margin: Optional[float] = None) -> float:
    """
    Single-histogram Scott width of the smallest scale, reused for all.
    """
    sigma, n = stats.sigmas[0], stats.counts[0]
    if sigma <= 0:
        raise DegenerateEnsembleError('Zero sigma at the smallest scale', details={'scale': stats.scales[0]})
    return SCOTT_CONSTANT * sigma * n ** (-1.0 / 3.0) * rho(q, margin)


def sturges(n: int) -> int:
    """
    Sturges bin count ceil(1 + log2 N).
    """
    if n < 1:
        raise ConfigurationError('Sturges rule needs N >= 1', details={'N': n})
    return int(math.ceil(1.0 + math.log2(n)))


def sturges_width(stats: EnsembleStats) -> float:
    data_range, n = stats.ranges[0], int(stats.counts[0])
    if data_range <= 0:
        raise DegenerateEnsembleError('Zero range at the smallest scale', details={'scale': stats.scales[0]})
    return data_range / sturges(n)


def resolve_width(
    rule: BinWidthRule,
    stats: Optional[EnsembleStats],
    q: float,
    margin: Optional[float] = None,
) -> Tuple[float, List[str]]:
    """
    Bin-width for order q under ``rule``, with any warnings raised on the way.
    """
    # flagged for every rule: below the margin the optimal-width theory does not hold
    warnings = [RHO_CLAMPED] if is_rho_clamped(q, margin) else []
    if warnings:
        logger.debug('rho_q clamped to 1 at q=%s', q)

    if rule.kind is RuleKind.FIXED:
        return rule.width, warnings

    if stats is None or not len(stats):
        raise DegenerateEnsembleError('Bin-width rule needs ensemble statistics')

    if rule.kind is RuleKind.SCOTT_MULTI:
        width = scott_multi(stats, q, margin)
    elif rule.kind is RuleKind.FD_MULTI:
        width = fd_multi(stats, q, margin)
    elif rule.kind is RuleKind.SCOTT_SINGLE:
        width = scott_single(stats, q, margin)
    else:
        width = sturges_width(stats)
    return width, warnings


def bin_count(data_range: float, h: float, compat: bool = False) -> int:
    """
    ceil(range / h) bins, or floor(range / h) + 1 under the compat
    convention; at least one bin.
    """
    ratio = data_range / h
    nearest = round(ratio)
    exact_multiple = abs(ratio - nearest) <= 1e-9 * max(1.0, ratio)
    if compat:
        return int(nearest if exact_multiple else math.floor(ratio)) + 1
    count = int(nearest if exact_multiple else math.ceil(ratio))
    return max(count, 1)


def build_histogram(data: Sequence[float], h: float, compat: bool = False) -> Histogram:
    """
    Equidistant histogram anchored at min(data) with bin-width h.
    """
    values = np.asarray(data, dtype=float)
    if values.size == 0:
        raise DataError('Cannot build a histogram of empty data')
    if not np.all(np.isfinite(values)):
        raise DataError('Histogram data must be finite')
    if not (h > 0 and math.isfinite(h)):
        raise ConfigurationError('Bin-width must be positive', details={'h': h})

    origin = float(values.min())
    n_bins = bin_count(float(values.max()) - origin, h, compat)
    if n_bins > MAX_BINS:
        raise ConfigurationError(
            'Bin-width too small for the data range',
            details={'h': h, 'bins': n_bins, 'max_bins': MAX_BINS},
        )
    index = np.floor((values - origin) / h).astype(np.int64)
    np.clip(index, 0, n_bins - 1, out=index)
    counts = np.bincount(index, minlength=n_bins)
    return Histogram(origin=origin, width=float(h), counts=counts, total=int(values.size), compat=compat)
