import logging
import time

from drf_yasg.utils import swagger_auto_schema
from rest_framework import generics, permissions, status
from rest_framework.response import Response
from rest_framework.views import APIView

from apps.splines.exceptions import SplineError
from apps.splines.services.knots import KnotVector
from apps.splines.views import error_response

from .models import FitRun
from .serializers import FitRequestSerializer, FitRunSerializer
from .services.curve import build_options, fit_curve

logger = logging.getLogger(__name__)


class FitView(APIView):
    """
    Fit a penalized spline and record the run
    """
    permission_classes = [permissions.AllowAny]

    @swagger_auto_schema(request_body=FitRequestSerializer)
    def post(self, request):
        serializer = FitRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        data = dict(serializer.validated_data)
        x, y = data.pop('x'), data.pop('y')
        started = time.monotonic()

        try:
            if data.get('knots'):
                data['knots'] = KnotVector(data['knots'], data['d'])
            options = build_options(**{key: value for key, value in data.items() if value is not None})
            curve = fit_curve(x, y, options)
        except SplineError as e:
            FitRun.objects.create(
                status=FitRun.Status.FAILED,
                flavor=data['flavor'],
                options={key: value for key, value in data.items() if key != 'knots'},
                n=len(x),
                error_message=str(e),
                processing_time=time.monotonic() - started,
            )
            return error_response(e)
        except Exception as e:
            return error_response(e)

        result = curve.result
        run = FitRun.objects.create(
            flavor=options.flavor,
            options=options.describe(),
            n=result.n,
            p=curve.knots.p,
            selected_lambda=result.lam,
            edf=result.edf,
            gcv=result.gcv,
            rss=result.rss,
            flat_gcv=result.flat_gcv,
            processing_time=time.monotonic() - started,
        )
        logger.info(f"Recorded fit {run.id}: lambda={result.lam:.6g}, edf={result.edf:.3f}")

        return Response({
            'run_id': str(run.id),
            **curve.as_dict(),
            'fitted': result.fitted.tolist(),
            'grid': {'x': curve.grid_x.tolist(), 'y': curve.grid_y.tolist()},
            'gcv_path': result.gcv_path,
        }, status=status.HTTP_201_CREATED)


class FitRunListView(generics.ListAPIView):
    """
    List recorded fits, optionally filtered by flavor or status
    """
    permission_classes = [permissions.AllowAny]
    serializer_class = FitRunSerializer

    def get_queryset(self):
        queryset = FitRun.objects.all()

        flavor = self.request.query_params.get('flavor')
        if flavor:
            queryset = queryset.filter(flavor=flavor)

        status_filter = self.request.query_params.get('status')
        if status_filter:
            queryset = queryset.filter(status=status_filter)

        return queryset
