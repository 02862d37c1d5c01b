"""
Value types for time series and their diffusion ensembles.

All containers are frozen and hold read-only numpy arrays, so they can be
shared between worker threads without copying.
"""
from dataclasses import dataclass, field
from typing import Dict, Iterator, Tuple

import numpy as np

from apps.core.exceptions import InvalidScaleError
from apps.core.validators import FiniteValuesValidator, StrictlyIncreasingValidator


def _frozen_array(values, dtype=float):
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class TimeSeries:
    """
    Uniformly lagged real-valued sequence.

    ``lag`` is metadata only (time units between samples); the length guard
    is applied by the pipeline, not here, so short series can still be
    built for direct calls.
    """
    values: np.ndarray
    lag: float = 1.0
    name: str = ''

    def __post_init__(self):
        values = _frozen_array(self.values)
        if values.ndim != 1:
            values = _frozen_array(values.ravel())
        FiniteValuesValidator('series values')(values)
        if not self.lag > 0:
            raise InvalidScaleError('lag must be positive', details={'lag': self.lag})
        object.__setattr__(self, 'values', values)

    def __len__(self):
        return int(self.values.size)

    def shifted(self, constant: float) -> 'TimeSeries':
        return TimeSeries(self.values + constant, lag=self.lag, name=self.name)


@dataclass(frozen=True)
class ScaleSet:
    """
    Strictly increasing window lengths, in lag units, all >= 2.
    """
    scales: Tuple[int, ...]

    def __post_init__(self):
        scales = tuple(int(s) for s in self.scales)
        StrictlyIncreasingValidator('scales', minimum=2, integers=True, error_class=InvalidScaleError)(
            list(self.scales)
        )
        object.__setattr__(self, 'scales', scales)

    def __iter__(self) -> Iterator[int]:
        return iter(self.scales)

    def __len__(self):
        return len(self.scales)

    @property
    def largest(self) -> int:
        return self.scales[-1]

    def log_scales(self) -> np.ndarray:
        return np.log(np.asarray(self.scales, dtype=float))

    def validate_for_length(self, length: int) -> None:
        if self.largest > length - 1:
            raise InvalidScaleError(
                'Scale exceeds series length - 1',
                details={'scale': self.largest, 'length': length},
            )


@dataclass(frozen=True)
class FluctuationEnsemble:
    """
    Mobile-window sums per scale: ``sums[s]`` holds the diffusion endpoints
    for window length ``s``.
    """
    series_length: int
    sums: Dict[int, np.ndarray] = field(default_factory=dict)
    compat: bool = False

    def __post_init__(self):
        frozen = {int(s): _frozen_array(v) for s, v in sorted(self.sums.items())}
        object.__setattr__(self, 'sums', frozen)

    def __len__(self):
        return len(self.sums)

    def __iter__(self) -> Iterator[Tuple[int, np.ndarray]]:
        return iter(self.sums.items())

    @property
    def scales(self) -> Tuple[int, ...]:
        return tuple(self.sums)

    def window_counts(self) -> Dict[int, int]:
        return {s: int(v.size) for s, v in self.sums.items()}

    def expected_window_count(self, scale: int) -> int:
        """N - s + 1 windows, or N - s under the compat convention."""
        count = self.series_length - scale + 1
        return count - 1 if self.compat else count
