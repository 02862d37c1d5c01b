"""
Test cases for shared validators, settings access and error mapping
"""
import math

import pytest
from rest_framework import status

from apps.core.conf import mfdea_setting
from apps.core.exceptions import (
    ConfigurationError, DataError, DivergentIntegralError, InsufficientDataError, InvalidScaleError,
    custom_exception_handler,
)
from apps.core.validators import (
    FiniteValuesValidator, MinimumLengthValidator, PositiveValidator, StrictlyIncreasingValidator,
)


class TestValidators:
    """Test the callable validators"""

    def test_finite_values(self):
        FiniteValuesValidator()([1.0, 2.0])
        with pytest.raises(DataError) as excinfo:
            FiniteValuesValidator('series')([1.0, math.nan, 3.0, math.inf])
        assert excinfo.value.details == {'positions': [1, 3], 'count': 2}

    def test_minimum_length_uses_setting(self, settings):
        settings.MULTIFRACTAL = {'MIN_SERIES_LENGTH': 4}
        MinimumLengthValidator()([1, 2, 3, 4])
        with pytest.raises(InsufficientDataError):
            MinimumLengthValidator()([1, 2, 3])

    @pytest.mark.parametrize('value', [0.0, -1.0, math.nan, math.inf, None])
    def test_positive(self, value):
        with pytest.raises(ConfigurationError):
            PositiveValidator('h')(value)

    def test_strictly_increasing(self):
        validator = StrictlyIncreasingValidator('scales', minimum=2, integers=True, error_class=InvalidScaleError)
        validator([2, 4, 8])
        for bad in ([], [4, 4], [8, 4], [1, 4], [2.5, 4]):
            with pytest.raises(InvalidScaleError):
                validator(bad)


class TestSettings:
    """Test the MULTIFRACTAL settings accessor"""

    def test_default(self, settings):
        settings.MULTIFRACTAL = {}
        assert mfdea_setting('CI_LEVEL') == 0.99

    def test_override(self, settings):
        settings.MULTIFRACTAL = {'CI_LEVEL': 0.95}
        assert mfdea_setting('CI_LEVEL') == 0.95

    def test_unknown(self):
        with pytest.raises(KeyError):
            mfdea_setting('NOT_A_SETTING')


class TestExceptionHandler:
    """Test the REST error envelope"""

    def test_exit_codes(self):
        assert ConfigurationError().exit_code == 2
        assert InsufficientDataError().exit_code == 3
        assert DivergentIntegralError().exit_code == 4

    def test_data_error_is_bad_request(self):
        response = custom_exception_handler(InsufficientDataError(details={'length': 3}), {})
        assert response.status_code == status.HTTP_400_BAD_REQUEST
        assert response.data == {
            'error': {'code': 'insufficient_data', 'message': 'Not enough data', 'details': {'length': 3}},
            'success': False,
        }

    def test_numeric_error_is_unprocessable(self):
        response = custom_exception_handler(DivergentIntegralError('diverges'), {})
        assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
        assert response.data['error']['code'] == 'divergent_integral'
