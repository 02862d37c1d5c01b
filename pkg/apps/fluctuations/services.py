"""
Fluctuation collection: turns a stationary series into an ensemble of
diffusion-trajectory endpoints, one set per window length.
"""
import logging
from typing import Iterable, Optional

import numpy as np

from apps.core.conf import mfdea_setting
from apps.core.exceptions import DomainError, InsufficientDataError, InvalidScaleError
from apps.core.validators import MinimumLengthValidator

from .types import FluctuationEnsemble, ScaleSet, TimeSeries

logger = logging.getLogger(__name__)


def default_scales(length: int) -> ScaleSet:
    """
    Geometric scale set {2^i : i = 2 .. floor(log2 N) - 3}.
    """
    minimum = mfdea_setting('MIN_SERIES_LENGTH')
    if length < minimum:
        raise InsufficientDataError('Not enough data', details={'length': length, 'minimum': minimum})
    # bit_length - 1 is floor(log2 N) without floating-point rounding
    top = int(length).bit_length() - 1 - 3
    return ScaleSet(tuple(2 ** i for i in range(2, top + 1)))


def resolve_scales(length: int, explicit: Optional[Iterable[int]] = None) -> ScaleSet:
    """
    Explicit scales validated against the series length, or the default set.
    """
    if explicit is None:
        return default_scales(length)
    scales = ScaleSet(tuple(explicit))
    scales.validate_for_length(length)
    return scales


def collect_fluctuations(series: TimeSeries, scales: Iterable[int], compat: bool = False) -> FluctuationEnsemble:
    """
    Mobile-window sums xi(s) = sum_{j=1..s} x_{j+k} for every offset k.

    The default keeps all N - s + 1 windows; ``compat`` drops the last one,
    giving N - s windows per scale. ``scales`` is normally a ScaleSet; a
    plain iterable is accepted for direct use, where s = 1 is the identity.
    """
    length = len(series)
    scales = [int(s) for s in scales]
    if not scales:
        raise InvalidScaleError('Scale set is empty')
    for s in scales:
        if s < 1 or (s > length - 1 and s != 1):
            raise InvalidScaleError('Scale exceeds series length - 1', details={'scale': s, 'length': length})

    cumulative = np.concatenate(([0.0], np.cumsum(series.values)))
    sums = {}
    for s in scales:
        window_sums = cumulative[s:] - cumulative[:-s]
        if compat:
            window_sums = window_sums[:-1]
        sums[s] = window_sums
        logger.debug('Collected %d windows at scale %d', window_sums.size, s)

    return FluctuationEnsemble(series_length=length, sums=sums, compat=compat)


def log_returns(prices: TimeSeries) -> TimeSeries:
    """
    r_t = ln(P_t / P_{t-1}); requires strictly positive prices.
    """
    values = prices.values
    non_positive = np.flatnonzero(values <= 0)
    if non_positive.size:
        raise DomainError(
            'Log returns need strictly positive prices',
            details={'positions': non_positive[:20].tolist()},
        )
    return TimeSeries(np.diff(np.log(values)), lag=prices.lag, name=prices.name)


def require_length(series: TimeSeries) -> None:
    """Pipeline guard: refuse spectra below MIN_SERIES_LENGTH points."""
    MinimumLengthValidator()(series.values)
