from rest_framework.views import exception_handler
from rest_framework.response import Response
from rest_framework import status
from rest_framework.exceptions import Throttled


class CrossingsError(Exception):
    """
    Base class for every failure the library reports on purpose.

    ``exit_code`` is what the management command exits with, ``status_code``
    what the HTTP mirror answers with.
    """
    exit_code = 1
    status_code = status.HTTP_500_INTERNAL_SERVER_ERROR
    error = 'error'

    def __init__(self, message, **detail):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def as_report(self):
        report = {'error': self.error, 'message': self.message}
        report.update(self.detail)
        return report


class InvalidInput(CrossingsError, ValueError):
    exit_code = 2
    status_code = status.HTTP_400_BAD_REQUEST
    error = 'invalid_input'


class PreconditionViolation(CrossingsError):
    exit_code = 3
    status_code = status.HTTP_422_UNPROCESSABLE_ENTITY
    error = 'precondition_violation'


class ResourceLimitExceeded(CrossingsError):
    exit_code = 4
    status_code = status.HTTP_413_REQUEST_ENTITY_TOO_LARGE
    error = 'resource_limit_exceeded'


def custom_exception_handler(exc, context):
    """
    Map library errors onto HTTP answers and give throttled callers a readable body.
    """
    if isinstance(exc, CrossingsError):
        return Response(exc.as_report(), status=exc.status_code)

    # Call REST framework's default exception handler first
    response = exception_handler(exc, context)

    if isinstance(exc, Throttled) and response is not None:
        response.data = {
            'error': 'Rate limit exceeded',
            'message': 'Too many analysis requests; several routines are exponential, please slow down.',
            'retry_after': exc.wait
        }
        response.status_code = status.HTTP_429_TOO_MANY_REQUESTS

    return response
