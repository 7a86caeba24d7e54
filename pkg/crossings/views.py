from rest_framework import status
from rest_framework.decorators import api_view, permission_classes, throttle_classes
from rest_framework.permissions import AllowAny
from rest_framework.response import Response

from . import reports
from .throttling import AnalysisRateThrottle


@api_view(['GET'])
@permission_classes([AllowAny])
def list_commands(request):
    """
    List the analyses this service runs.

    ---
    responses:
        200:
            description: Command names with the switches each one accepts
            content:
                application/json:
                    schema:
                        type: object
                        properties:
                            commands:
                                type: array
                                items:
                                    type: object
                                example: [{"name": "divide", "flags": ["fold_minimal"]}]
    """
    return Response({
        'commands': [
            {'name': name, 'flags': list(reports.COMMANDS[name].flags)}
            for name in sorted(reports.COMMANDS)
        ]
    })


@api_view(['POST'])
@permission_classes([AllowAny])
@throttle_classes([AnalysisRateThrottle])
def run_command(request, command):
    """
    Run one analysis on the case file in the request body.

    The body is the same JSON the ``crossings`` management command reads.
    Negative verdicts are ordinary 200 answers; schema errors answer 400,
    precondition violations 422 and exceeded resource guards 413.
    Rate limited per IP address.

    ---
    requestBody:
        required: true
        content:
            application/json:
                schema:
                    type: object
                    example: {"ambient": 3, "subspaces": [{"basis": [[1, 0, 0]]}, {"basis": [[0, 1, 0]]}]}
    responses:
        200:
            description: Analysis report
            content:
                application/json:
                    schema:
                        type: object
                        properties:
                            result:
                                description: Verdict or computed value
                                example: true
        400:
            description: Malformed case file
        413:
            description: A resource guard was exceeded
        422:
            description: A precondition of the analysis does not hold
        429:
            description: Too many analysis requests
    """
    report = reports.run(command, request.data)
    return Response(report, status=status.HTTP_200_OK)
