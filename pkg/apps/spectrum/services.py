"""
Renyi entropies of the fluctuation histograms, the delta(q) regression and
the Legendre-transformed spectra.

Entropies are those of the discrete histogram probabilities. All scales
share one bin-width at fixed q, so the ln h term separating discrete and
differential entropies is the same at every scale and drops out of the
slope.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np
from scipy import stats
from scipy.special import logsumexp

from apps.core.conf import mfdea_setting
from apps.core.exceptions import (
    ConfigurationError, DataError, DegenerateEnsembleError, DomainError, InsufficientScalesError,
)
from apps.fluctuations.types import FluctuationEnsemble
from apps.histogram.services import build_histogram, resolve_width
from apps.histogram.types import BinWidthRule, EnsembleStats, RuleKind

from .types import DeltaFit, EntropySurface, LegendreSpectrum, QGrid, SpectrumResult

logger = logging.getLogger(__name__)

MISSING_SCALES = 'missing-scales'
INFINITE_ENTROPY = 'infinite-entropy'
INSUFFICIENT_SCALES = 'insufficient-scales'


def renyi_entropy(probabilities, q: float) -> float:
    """
    H_q = 1/(1-q) ln sum_{p_i > 0} p_i^q, Shannon entropy at q = 1.

    Zero-mass bins are skipped. For q < 0 an empty bin contributes 0^q and
    the entropy is +inf.
    """
    p = np.asarray(probabilities, dtype=float)
    if not math.isfinite(q):
        raise ConfigurationError('q must be finite', details={'q': q})
    if np.any(p < 0):
        raise DomainError('Probabilities must be non-negative', details={'negative': int(np.sum(p < 0))})
    total = float(p.sum())
    if abs(total - 1.0) > mfdea_setting('PROBABILITY_TOLERANCE') * max(1, p.size):
        raise DataError('Probabilities must sum to one', details={'sum': total})

    occupied = p[p > 0]
    if q < 0 and occupied.size < p.size:
        return math.inf
    if abs(q - 1.0) < mfdea_setting('SHANNON_TOLERANCE'):
        return float(-np.sum(occupied * np.log(occupied)))
    return float(logsumexp(q * np.log(occupied)) / (1.0 - q))


def _entropy_column(ensemble, usable_stats, missing, rule, q, margin):
    width, warnings = resolve_width(rule, usable_stats, q, margin)
    column = []
    for scale, sums in ensemble:
        if scale in missing:
            column.append(math.nan)
            continue
        hist = build_histogram(sums, width, compat=ensemble.compat)
        column.append(renyi_entropy(hist.probabilities, q))
    if missing:
        warnings.append(MISSING_SCALES)
    if any(math.isinf(value) for value in column):
        warnings.append(INFINITE_ENTROPY)
    return width, column, warnings


def entropy_surface(
    ensemble: FluctuationEnsemble,
    q_grid: QGrid,
    rule: BinWidthRule,
    margin: Optional[float] = None,
    workers: Optional[int] = None,
) -> EntropySurface:
    """
    H_q(s) for every q on the grid and every scale of the ensemble.

    Each q gets one width from ``rule`` applied to the non-degenerate
    scales; degenerate scales (all sums equal) become NaN cells.
    """
    if not len(ensemble):
        raise DegenerateEnsembleError('Fluctuation ensemble is empty')

    all_stats = EnsembleStats.from_ensemble(ensemble)
    missing = set(all_stats.degenerate_scales())
    usable = all_stats.restricted_to([s for s in ensemble.scales if s not in missing])
    if missing:
        logger.warning('Degenerate scales excluded: %s', sorted(missing))
    if not len(usable) and rule.kind is not RuleKind.FIXED:
        raise DegenerateEnsembleError('Every scale is degenerate', details={'scales': list(ensemble.scales)})

    workers = workers or mfdea_setting('WORKERS')

    def column(q):
        return _entropy_column(ensemble, usable, missing, rule, q, margin)

    q_values = list(q_grid)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            columns = list(pool.map(column, q_values))
    else:
        columns = [column(q) for q in q_values]

    logger.debug('Entropy surface: %d q x %d scales', len(q_values), len(ensemble))
    return EntropySurface(
        q_grid=q_grid,
        scales=ensemble.scales,
        entropies=np.array([c for _, c, _ in columns], dtype=float).reshape(len(q_values), len(ensemble)),
        bin_widths=np.array([w for w, _, _ in columns]),
        warnings=tuple(tuple(w) for _, _, w in columns),
        missing_scales=tuple(sorted(missing)),
    )


def fit_line(x, y, ci_level: Optional[float] = None) -> Tuple[float, float, float, float, float, float]:
    """
    Ordinary least squares y = a + b x.

    Returns (b, a, stderr of b, ci low, ci high, R^2); the interval uses the
    Student-t quantile with n - 2 degrees of freedom.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    minimum = max(3, mfdea_setting('MIN_REGRESSION_SCALES'))
    if x.size < minimum:
        raise InsufficientScalesError(
            'Too few scales for regression',
            details={'points': int(x.size), 'minimum': minimum},
        )
    ci_level = mfdea_setting('CI_LEVEL') if ci_level is None else ci_level

    dx = x - x.mean()
    sxx = float(dx @ dx)
    slope = float(dx @ (y - y.mean())) / sxx
    intercept = float(y.mean() - slope * x.mean())
    residuals = y - (intercept + slope * x)
    rss = float(residuals @ residuals)
    dof = x.size - 2
    stderr = math.sqrt(rss / dof / sxx)

    spread = y - y.mean()
    ss_tot = float(spread @ spread)
    r_squared = 1.0 if ss_tot == 0 else min(max(1.0 - rss / ss_tot, 0.0), 1.0)

    t_critical = stats.t.ppf(0.5 + ci_level / 2.0, dof)
    return slope, intercept, stderr, slope - t_critical * stderr, slope + t_critical * stderr, r_squared


def fit_delta(surface: EntropySurface, ci_level: Optional[float] = None, strict: bool = False) -> SpectrumResult:
    """
    delta(q) as the slope of H_q against ln s, one fit per q.

    A q with fewer usable scales than the regression minimum gets NaN
    values and the ``insufficient-scales`` warning, or raises when
    ``strict``.
    """
    ci_level = mfdea_setting('CI_LEVEL') if ci_level is None else ci_level
    fits: List[DeltaFit] = []
    for index, q in enumerate(surface.q_grid):
        x, y = surface.row(index)
        warnings = surface.warnings[index]
        try:
            slope, intercept, stderr, low, high, r_squared = fit_line(x, y, ci_level)
        except InsufficientScalesError as exc:
            if strict:
                raise
            logger.warning('No regression at q=%s: %s', q, exc.message)
            fits.append(DeltaFit(
                q=q, delta=math.nan, intercept=math.nan, stderr=math.nan,
                ci_low=math.nan, ci_high=math.nan, r_squared=math.nan,
                n_points=int(x.size), warnings=warnings + (INSUFFICIENT_SCALES,),
            ))
            continue
        fits.append(DeltaFit(
            q=q, delta=slope, intercept=intercept, stderr=stderr,
            ci_low=low, ci_high=high, r_squared=r_squared,
            n_points=int(x.size), warnings=warnings,
        ))
    return SpectrumResult(fits=tuple(fits), ci_level=ci_level)


def _finite_runs(mask: np.ndarray):
    """(start, stop) index pairs of consecutive True entries."""
    runs, start = [], None
    for i, flag in enumerate(mask):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((start, i))
            start = None
    if start is not None:
        runs.append((start, mask.size))
    return runs


def legendre_spectrum(result: SpectrumResult, q_grid: Optional[QGrid] = None) -> LegendreSpectrum:
    """
    D(q) = delta(q), tau = (q - 1) D, alpha = d tau / dq by central
    differences (one-sided at the ends of each defined run), f = q alpha - tau.
    """
    q = q_grid.values if q_grid is not None else result.q_values
    delta = result.deltas
    if q.size != delta.size:
        raise ConfigurationError('q-grid does not match the fitted spectrum')
    if q.size < 3:
        raise ConfigurationError(
            'q-grid too sparse for the Legendre transform',
            details={'points': int(q.size), 'minimum': 3},
        )

    tau = (q - 1.0) * delta
    alpha = np.full(q.size, math.nan)
    notes = []
    for start, stop in _finite_runs(np.isfinite(tau)):
        if stop - start < 2:
            notes.append(f'alpha undefined at q={q[start]}')
            continue
        alpha[start:stop] = np.gradient(tau[start:stop], q[start:stop])
    f_alpha = q * alpha - tau
    return LegendreSpectrum(q=q, d_q=delta, tau=tau, alpha=alpha, f_alpha=f_alpha, notes=tuple(notes))
