import logging

from drf_yasg.utils import swagger_auto_schema
from rest_framework import permissions, status
from rest_framework.response import Response
from rest_framework.views import APIView

from .exceptions import SplineError
from .serializers import KnotPlacementSerializer, KnotVectorSerializer, PenaltyRequestSerializer
from .services.io import knots_to_dict
from .services.knots import KnotVector, place_knots, validate
from .services.penalty import build_penalty

logger = logging.getLogger(__name__)


def error_response(exc):
    """Map a domain error to 400 and anything else to 500"""
    if isinstance(exc, SplineError):
        logger.info(f"Rejected request: {exc}")
        return Response({'error': str(exc)}, status=status.HTTP_400_BAD_REQUEST)
    logger.error(f"Unexpected error: {exc}", exc_info=True)
    return Response({'error': 'Internal error'}, status=status.HTTP_500_INTERNAL_SERVER_ERROR)


def band_payload(band):
    rows, cols, values = band.triplets()
    return {
        'rows': rows.tolist(),
        'cols': cols.tolist(),
        'values': values.tolist(),
    }


class KnotPlacementView(APIView):
    """
    Place uniform or clamped-quantile knots
    """
    permission_classes = [permissions.AllowAny]

    @swagger_auto_schema(request_body=KnotPlacementSerializer)
    def post(self, request):
        serializer = KnotPlacementSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        data = serializer.validated_data
        try:
            kv = place_knots(data['strategy'], data.get('x', []), data['k'], data['d'], domain=data.get('domain'))
        except Exception as e:
            return error_response(e)
        return Response({**knots_to_dict(kv), **validate(kv).as_dict()})


class KnotValidationView(APIView):
    """
    Report bookkeeping and violations for a knot sequence
    """
    permission_classes = [permissions.AllowAny]

    @swagger_auto_schema(request_body=KnotVectorSerializer)
    def post(self, request):
        serializer = KnotVectorSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        report = validate(serializer.validated_data['t'], serializer.validated_data['d'])
        return Response(report.as_dict())


class PenaltyView(APIView):
    """
    Difference matrix, Gram matrix, penalty and root for a knot sequence
    """
    permission_classes = [permissions.AllowAny]

    @swagger_auto_schema(request_body=PenaltyRequestSerializer)
    def post(self, request):
        serializer = PenaltyRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        data = serializer.validated_data
        try:
            kv = KnotVector(data['t'], data['d'])
            penalty = build_penalty(kv, data['m'], data['flavor'])
        except Exception as e:
            return error_response(e)

        payload = {
            'd': kv.d,
            'm': penalty.m,
            'p': penalty.p,
            'flavor': penalty.flavor,
            'D': penalty.diff.to_dense().tolist(),
            'Sbar': penalty.gram.to_dense().tolist() if penalty.gram is not None else None,
            'S': penalty.to_dense().tolist(),
            'K': penalty.root.to_dense().tolist(),
        }
        if data['include_triplets']:
            payload['K_triplets'] = band_payload(penalty.root)
            payload['D_triplets'] = band_payload(penalty.diff.band)
        return Response(payload)
