"""
Exceptions and error handling for the MF-DEA project.

Every error carries a machine-readable ``code`` and an ``exit_code`` so the
same hierarchy drives both the management commands and the REST API.
"""
from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import exception_handler


class MultifractalError(Exception):
    """
    Base exception class for the MF-DEA pipeline.
    """
    default_message = 'An error occurred'
    default_code = 'error'
    exit_code = 1

    def __init__(self, message=None, code=None, details=None):
        self.message = message or self.default_message
        self.code = code or self.default_code
        self.details = details or {}
        super().__init__(self.message)

    def as_dict(self):
        return {
            'code': self.code,
            'message': str(self.message),
            'details': self.details,
        }


class ConfigurationError(MultifractalError):
    """
    Invalid run configuration (flags, q-grid, scales, rules).
    """
    default_message = 'Invalid configuration'
    default_code = 'bad_config'
    exit_code = 2


class InvalidScaleError(ConfigurationError):
    default_message = 'Invalid scale set'
    default_code = 'invalid_scale'


class DataError(MultifractalError):
    """
    Input data cannot be analysed as given.
    """
    default_message = 'Data error'
    default_code = 'data_error'
    exit_code = 3


class InsufficientDataError(DataError):
    default_message = 'Not enough data'
    default_code = 'insufficient_data'


class DataFormatError(DataError):
    default_message = 'Unparseable input data'
    default_code = 'data_format'


class DomainError(DataError):
    default_message = 'Value outside the domain of the transform'
    default_code = 'domain_error'


class NumericalError(MultifractalError):
    """
    A numerical step failed or is undefined for the given inputs.
    """
    default_message = 'Numerical failure'
    default_code = 'numeric_failure'
    exit_code = 4


class DegenerateEnsembleError(NumericalError):
    default_message = 'Degenerate fluctuation ensemble'
    default_code = 'degenerate_ensemble'


class DivergentIntegralError(NumericalError):
    default_message = 'Integral diverges for the requested order'
    default_code = 'divergent_integral'


class InsufficientScalesError(NumericalError):
    default_message = 'Too few scales for regression'
    default_code = 'insufficient_scales'


class QuadratureError(NumericalError):
    default_message = 'Quadrature did not converge'
    default_code = 'quadrature_error'


STATUS_BY_EXIT_CODE = {
    ConfigurationError.exit_code: status.HTTP_400_BAD_REQUEST,
    DataError.exit_code: status.HTTP_400_BAD_REQUEST,
    NumericalError.exit_code: status.HTTP_422_UNPROCESSABLE_ENTITY,
}


def custom_exception_handler(exc, context):
    """
    Custom exception handler that returns consistent error responses.
    """
    if isinstance(exc, MultifractalError):
        status_code = STATUS_BY_EXIT_CODE.get(exc.exit_code, status.HTTP_500_INTERNAL_SERVER_ERROR)
        return Response({'error': exc.as_dict(), 'success': False}, status=status_code)

    response = exception_handler(exc, context)

    if response is not None and (not isinstance(response.data, dict) or 'error' not in response.data):
        response.data = {
            'error': {
                'code': 'api_error',
                'message': 'An error occurred processing your request.',
                'details': response.data if isinstance(response.data, dict) else {'errors': response.data},
            },
            'success': False,
        }

    return response
