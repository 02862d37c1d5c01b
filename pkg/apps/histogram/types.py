"""
Histogram, bin-width rule and ensemble statistics types.
"""
import enum
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import stats as sps

from apps.core.exceptions import ConfigurationError


@dataclass(frozen=True)
class Histogram:
    """
    Equidistant histogram: bin i covers [origin + i*h, origin + (i+1)*h).

    The last bin is closed on the right.
    """
    origin: float
    width: float
    counts: np.ndarray
    total: int
    compat: bool = False

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64)
        counts.setflags(write=False)
        object.__setattr__(self, 'counts', counts)

    @property
    def n_bins(self) -> int:
        return int(self.counts.size)

    @property
    def edges(self) -> np.ndarray:
        return self.origin + self.width * np.arange(self.n_bins + 1)

    @property
    def probabilities(self) -> np.ndarray:
        """p_i = nu_i / total, summing to one."""
        return self.counts / float(self.total)

    @property
    def densities(self) -> np.ndarray:
        """Piecewise-constant density height p_i / h on each bin."""
        return self.probabilities / self.width

    def as_distribution(self):
        """The histogram as a scipy piecewise-constant distribution."""
        return sps.rv_histogram((self.counts.astype(float), self.edges))


class RuleKind(str, enum.Enum):
    SCOTT_MULTI = 'scott'
    FD_MULTI = 'fd'
    SCOTT_SINGLE = 'scott-single'
    STURGES = 'sturges'
    FIXED = 'fixed'


@dataclass(frozen=True)
class BinWidthRule:
    """
    How the shared per-q bin-width is chosen.

    Parsed from the CLI form ``scott``, ``fd``, ``scott-single``,
    ``sturges`` or ``fixed:<h>``.
    """
    kind: RuleKind = RuleKind.SCOTT_MULTI
    width: Optional[float] = None

    def __post_init__(self):
        kind = RuleKind(self.kind)
        object.__setattr__(self, 'kind', kind)
        if kind is RuleKind.FIXED:
            if self.width is None or not np.isfinite(self.width) or self.width <= 0:
                raise ConfigurationError('Fixed bin-width must be positive', details={'width': self.width})
        elif self.width is not None:
            raise ConfigurationError(f"Rule '{kind.value}' takes no width")

    @classmethod
    def parse(cls, text: str) -> 'BinWidthRule':
        label, _, argument = str(text).strip().lower().partition(':')
        try:
            kind = RuleKind(label)
        except ValueError:
            choices = ', '.join(k.value for k in RuleKind)
            raise ConfigurationError(f"Unknown bin-width rule '{text}'", details={'choices': choices})
        if kind is RuleKind.FIXED:
            try:
                return cls(kind, float(argument))
            except ValueError:
                raise ConfigurationError(f"Fixed rule needs a numeric width, got '{argument}'")
        if argument:
            raise ConfigurationError(f"Rule '{label}' takes no argument")
        return cls(kind)

    @property
    def label(self) -> str:
        if self.kind is RuleKind.FIXED:
            return f'fixed:{self.width!r}'
        return self.kind.value


@dataclass(frozen=True)
class EnsembleStats:
    """
    Per-scale spread estimates: sample standard deviation (N-1 denominator),
    type-7 interquartile range, window count and data range.
    """
    scales: Tuple[int, ...]
    sigmas: np.ndarray
    iqrs: np.ndarray
    counts: np.ndarray
    ranges: np.ndarray

    def __post_init__(self):
        for name in ('sigmas', 'iqrs', 'counts', 'ranges'):
            array = np.array(getattr(self, name), dtype=float)
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        object.__setattr__(self, 'scales', tuple(int(s) for s in self.scales))
        sizes = {len(self.scales), self.sigmas.size, self.iqrs.size, self.counts.size, self.ranges.size}
        if len(sizes) != 1:
            raise ConfigurationError('Ensemble statistics must have one entry per scale')

    @classmethod
    def from_samples(cls, samples_by_scale) -> 'EnsembleStats':
        scales, sigmas, iqrs, counts, ranges = [], [], [], [], []
        for scale, sample in samples_by_scale:
            sample = np.asarray(sample, dtype=float)
            scales.append(scale)
            counts.append(sample.size)
            sigmas.append(sample.std(ddof=1) if sample.size > 1 else 0.0)
            q25, q75 = np.percentile(sample, [25, 75]) if sample.size else (0.0, 0.0)
            iqrs.append(q75 - q25)
            ranges.append(np.ptp(sample) if sample.size else 0.0)
        return cls(tuple(scales), sigmas, iqrs, counts, ranges)

    @classmethod
    def from_ensemble(cls, ensemble) -> 'EnsembleStats':
        return cls.from_samples(ensemble)

    def __len__(self):
        return len(self.scales)

    def degenerate_scales(self) -> Tuple[int, ...]:
        """Scales whose sums are all equal (zero spread) or too few to estimate."""
        mask = (self.sigmas <= 0) | (self.counts < 2)
        return tuple(s for s, bad in zip(self.scales, mask) if bad)

    def restricted_to(self, scales) -> 'EnsembleStats':
        wanted = set(scales)
        keep = [i for i, s in enumerate(self.scales) if s in wanted]
        return EnsembleStats(
            tuple(self.scales[i] for i in keep),
            self.sigmas[keep], self.iqrs[keep], self.counts[keep], self.ranges[keep],
        )
