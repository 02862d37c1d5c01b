"""
Containers for the entropy surface and the spectra derived from it.
"""
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Tuple

import numpy as np

from apps.core.conf import mfdea_setting
from apps.core.exceptions import ConfigurationError
from apps.core.validators import StrictlyIncreasingValidator


def _frozen(values, dtype=float):
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class QGrid:
    """
    Strictly increasing orders q_j. Negative orders need ``allow_negative``;
    q = 0 is part of the default grid and always accepted.
    """
    values: np.ndarray
    allow_negative: bool = False

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 1 or values.size == 0:
            raise ConfigurationError('q-grid must be a non-empty sequence')
        if not np.all(np.isfinite(values)):
            raise ConfigurationError('q-grid must be finite', details={'q': values.tolist()})
        StrictlyIncreasingValidator('q-grid')(values.tolist())
        if not self.allow_negative and values[0] < 0:
            raise ConfigurationError(
                'Negative q is unreliable; pass allow_negative to use it',
                details={'q_min': float(values[0])},
            )
        object.__setattr__(self, 'values', values)

    @classmethod
    def from_range(cls, q_min=None, q_max=None, step=None, allow_negative=False) -> 'QGrid':
        q_min = mfdea_setting('DEFAULT_Q_MIN') if q_min is None else float(q_min)
        q_max = mfdea_setting('DEFAULT_Q_MAX') if q_max is None else float(q_max)
        step = mfdea_setting('DEFAULT_Q_STEP') if step is None else float(step)
        if not step > 0:
            raise ConfigurationError('q-step must be positive', details={'q_step': step})
        if q_min > q_max:
            raise ConfigurationError('q-min exceeds q-max', details={'q_min': q_min, 'q_max': q_max})
        count = int(math.floor((q_max - q_min) / step + 1e-9)) + 1
        # rounding keeps 0.1-steps printable as 0.3 rather than 0.30000000000000004
        values = np.round(q_min + step * np.arange(count), 12)
        return cls(values, allow_negative=allow_negative)

    def __len__(self):
        return int(self.values.size)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values.tolist())


@dataclass(frozen=True)
class EntropySurface:
    """
    H[j, i] = Renyi entropy of order q_j at scale s_i; NaN marks a missing
    cell (degenerate scale). ``bin_widths[j]`` is the width shared by all
    scales at q_j.
    """
    q_grid: QGrid
    scales: Tuple[int, ...]
    entropies: np.ndarray
    bin_widths: np.ndarray
    warnings: Tuple[Tuple[str, ...], ...] = ()
    missing_scales: Tuple[int, ...] = ()

    def __post_init__(self):
        entropies = _frozen(self.entropies)
        expected = (len(self.q_grid), len(self.scales))
        if entropies.shape != expected:
            raise ConfigurationError(
                'Entropy matrix does not match the grid',
                details={'shape': entropies.shape, 'expected': expected},
            )
        object.__setattr__(self, 'entropies', entropies)
        object.__setattr__(self, 'bin_widths', _frozen(self.bin_widths))
        object.__setattr__(self, 'scales', tuple(int(s) for s in self.scales))
        warnings = tuple(tuple(w) for w in self.warnings) or tuple(() for _ in self.q_grid.values)
        object.__setattr__(self, 'warnings', warnings)

    @property
    def log_scales(self) -> np.ndarray:
        return np.log(np.asarray(self.scales, dtype=float))

    def row(self, index: int) -> Tuple[np.ndarray, np.ndarray]:
        """(ln s, H) at q_index with missing and infinite cells dropped."""
        values = self.entropies[index]
        keep = np.isfinite(values)
        return self.log_scales[keep], values[keep]

    def rows(self) -> Iterator[Tuple[float, int, float]]:
        """Flat (q, s, H) triples, q-major, for dumping the surface."""
        for j, q in enumerate(self.q_grid.values):
            for i, s in enumerate(self.scales):
                yield float(q), s, float(self.entropies[j, i])


@dataclass(frozen=True)
class DeltaFit:
    """
    Least-squares line H = intercept + delta ln s at one q.
    """
    q: float
    delta: float
    intercept: float
    stderr: float
    ci_low: float
    ci_high: float
    r_squared: float
    n_points: int
    warnings: Tuple[str, ...] = ()


@dataclass(frozen=True)
class SpectrumResult:
    fits: Tuple[DeltaFit, ...]
    ci_level: float = 0.99

    def __len__(self):
        return len(self.fits)

    def __iter__(self) -> Iterator[DeltaFit]:
        return iter(self.fits)

    @property
    def q_values(self) -> np.ndarray:
        return np.array([fit.q for fit in self.fits])

    @property
    def deltas(self) -> np.ndarray:
        return np.array([fit.delta for fit in self.fits])


@dataclass(frozen=True)
class LegendreSpectrum:
    """
    tau(q) = (q - 1) D(q), alpha = d tau / dq, f(alpha) = q alpha - tau.
    NaN wherever delta is undefined or a neighbour needed by the
    finite difference is.
    """
    q: np.ndarray
    d_q: np.ndarray
    tau: np.ndarray
    alpha: np.ndarray
    f_alpha: np.ndarray
    notes: Sequence[str] = field(default_factory=tuple)

    def __post_init__(self):
        for name in ('q', 'd_q', 'tau', 'alpha', 'f_alpha'):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    def generalized_dimension(self) -> np.ndarray:
        """tau / (q - 1); at q = 1 the delta value itself."""
        with np.errstate(divide='ignore', invalid='ignore'):
            dims = self.tau / (self.q - 1.0)
        at_one = np.isclose(self.q, 1.0, atol=1e-9)
        dims[at_one] = self.d_q[at_one]
        return dims
