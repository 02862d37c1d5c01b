"""
Test cases for fluctuation collection, scale selection and returns
"""
import math

import numpy as np
import pytest

from apps.core.exceptions import DataError, DomainError, InsufficientDataError, InvalidScaleError
from apps.fluctuations.services import (
    collect_fluctuations, default_scales, log_returns, require_length, resolve_scales,
)
from apps.fluctuations.types import ScaleSet, TimeSeries


@pytest.fixture
def rng():
    return np.random.default_rng(20130301)


class TestTimeSeries:
    """Test the series container invariants"""

    def test_rejects_non_finite_values(self):
        with pytest.raises(DataError):
            TimeSeries([1.0, float('nan'), 2.0])

    def test_values_are_read_only(self):
        series = TimeSeries([1.0, 2.0])
        with pytest.raises(ValueError):
            series.values[0] = 5.0

    def test_pipeline_guard_refuses_short_series(self):
        with pytest.raises(InsufficientDataError):
            require_length(TimeSeries(np.ones(127)))
        require_length(TimeSeries(np.ones(128)))


class TestScaleSelection:
    """Test the geometric default scale set and explicit overrides"""

    def test_default_scales_for_16000_points(self):
        assert default_scales(16000).scales == (4, 8, 16, 32, 64, 128, 256, 512, 1024)

    def test_default_scales_for_minimum_length(self):
        assert default_scales(128).scales == (4, 8, 16)

    def test_default_scales_below_minimum_length(self):
        with pytest.raises(InsufficientDataError):
            default_scales(127)

    def test_scale_set_must_increase(self):
        with pytest.raises(InvalidScaleError):
            ScaleSet((8, 4))

    def test_scale_set_minimum_is_two(self):
        with pytest.raises(InvalidScaleError):
            ScaleSet((1, 4))

    def test_explicit_scales_validated_against_length(self):
        with pytest.raises(InvalidScaleError):
            resolve_scales(200, [4, 8, 200])
        assert resolve_scales(200, [4, 8, 199]).scales == (4, 8, 199)


class TestCollectFluctuations:
    """Test the mobile-window sums"""

    def test_direct_summation(self):
        ensemble = collect_fluctuations(TimeSeries([1, 2, 3, 4]), [2])
        np.testing.assert_allclose(ensemble.sums[2], [3, 5, 7])

    def test_single_window_identity(self):
        ensemble = collect_fluctuations(TimeSeries([5.0]), [1])
        np.testing.assert_allclose(ensemble.sums[1], [5.0])

    def test_scale_above_length_is_rejected(self):
        with pytest.raises(InvalidScaleError):
            collect_fluctuations(TimeSeries(np.arange(10.0)), [10])

    def test_window_count_identity(self, rng):
        series = TimeSeries(rng.standard_normal(512))
        scales = default_scales(len(series))
        default_mode = collect_fluctuations(series, scales)
        compat = collect_fluctuations(series, scales, compat=True)
        for s in scales:
            assert default_mode.sums[s].size == len(series) - s + 1
            assert compat.sums[s].size == len(series) - s
            assert default_mode.expected_window_count(s) == default_mode.sums[s].size
            assert compat.expected_window_count(s) == compat.sums[s].size

    def test_shift_covariance(self, rng):
        series = TimeSeries(rng.standard_normal(256))
        constant = 0.37
        base = collect_fluctuations(series, [2, 8, 32])
        shifted = collect_fluctuations(series.shifted(constant), [2, 8, 32])
        for s in (2, 8, 32):
            np.testing.assert_allclose(shifted.sums[s] - base.sums[s], s * constant, atol=1e-10)

    @pytest.mark.parametrize('seed', range(5))
    def test_additivity_against_brute_force(self, seed):
        generator = np.random.default_rng(seed)
        length = int(generator.integers(4, 33))
        values = generator.normal(size=length)
        scales = sorted({int(s) for s in generator.integers(1, length, size=3)})
        ensemble = collect_fluctuations(TimeSeries(values), scales)
        for s in scales:
            brute = [sum(values[k:k + s]) for k in range(length - s + 1)]
            np.testing.assert_allclose(ensemble.sums[s], brute, rtol=1e-12, atol=1e-12)

    def test_gaussian_sum_spread_scales_with_sqrt_window(self, rng):
        # overlapping windows are correlated, so pool a few independent series
        spreads = [
            collect_fluctuations(TimeSeries(rng.standard_normal(16384)), [64]).sums[64].std(ddof=1)
            for _ in range(4)
        ]
        assert np.mean(spreads) == pytest.approx(8.0, rel=0.05)


class TestLogReturns:
    """Test the log-return transform"""

    def test_exponential_prices(self):
        returns = log_returns(TimeSeries([1.0, math.e, math.e ** 2]))
        np.testing.assert_allclose(returns.values, [1.0, 1.0])

    def test_constant_price(self):
        np.testing.assert_allclose(log_returns(TimeSeries([100.0, 100.0])).values, [0.0])

    def test_falling_price(self):
        np.testing.assert_allclose(log_returns(TimeSeries([2.0, 1.0])).values, [-math.log(2)])

    def test_non_positive_price(self):
        with pytest.raises(DomainError):
            log_returns(TimeSeries([1.0, 0.0, 2.0]))
