"""
Reusable validators for numeric inputs.

Validators are callables in the Django style: configure once, call with a
value, raise on failure and return nothing on success.
"""
import math

import numpy as np

from .conf import mfdea_setting
from .exceptions import ConfigurationError, DataError, InsufficientDataError


class FiniteValuesValidator:
    """
    Reject sequences containing NaN or infinite entries.
    """

    def __init__(self, label='values'):
        self.label = label

    def __call__(self, values):
        array = np.asarray(values, dtype=float)
        bad = np.flatnonzero(~np.isfinite(array))
        if bad.size:
            raise DataError(
                f'{self.label} must be finite',
                details={'positions': bad[:20].tolist(), 'count': int(bad.size)},
            )


class MinimumLengthValidator:
    """
    Enforce a minimum series length (defaults to MIN_SERIES_LENGTH).
    """

    def __init__(self, minimum=None):
        self.minimum = minimum

    def __call__(self, values):
        minimum = self.minimum if self.minimum is not None else mfdea_setting('MIN_SERIES_LENGTH')
        if len(values) < minimum:
            raise InsufficientDataError(
                'Not enough data',
                details={'length': len(values), 'minimum': minimum},
            )


class PositiveValidator:
    """
    Require a strictly positive finite real.
    """

    def __init__(self, label, error_class=ConfigurationError):
        self.label = label
        self.error_class = error_class

    def __call__(self, value):
        if value is None or not math.isfinite(value) or value <= 0:
            raise self.error_class(f'{self.label} must be a positive finite number', details={self.label: value})


class StrictlyIncreasingValidator:
    """
    Require a strictly increasing sequence, optionally bounded below.
    """

    def __init__(self, label, minimum=None, integers=False, error_class=ConfigurationError):
        self.label = label
        self.minimum = minimum
        self.integers = integers
        self.error_class = error_class

    def __call__(self, values):
        if len(values) == 0:
            raise self.error_class(f'{self.label} must not be empty')
        if self.integers and any(int(v) != v for v in values):
            raise self.error_class(f'{self.label} must be integers', details={self.label: list(values)})
        if any(b <= a for a, b in zip(values, values[1:])):
            raise self.error_class(f'{self.label} must be strictly increasing', details={self.label: list(values)})
        if self.minimum is not None and values[0] < self.minimum:
            raise self.error_class(
                f'{self.label} must all be >= {self.minimum}',
                details={self.label: list(values)},
            )
