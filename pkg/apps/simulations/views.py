import logging

from drf_yasg.utils import swagger_auto_schema
from rest_framework import generics, permissions, status
from rest_framework.response import Response

from apps.splines.exceptions import SplineError
from apps.splines.views import error_response

from .models import StudyRun
from .serializers import StudyRequestSerializer, StudyRunSerializer
from .services.studies import build_study_config
from .tasks import run_study_task

logger = logging.getLogger(__name__)


class StudyRunListCreateView(generics.ListCreateAPIView):
    """
    List study runs or queue a new one
    """
    permission_classes = [permissions.AllowAny]
    serializer_class = StudyRunSerializer

    def get_queryset(self):
        queryset = StudyRun.objects.all()

        study = self.request.query_params.get('study')
        if study:
            queryset = queryset.filter(study=study)

        status_filter = self.request.query_params.get('status')
        if status_filter:
            queryset = queryset.filter(status=status_filter)

        return queryset

    @swagger_auto_schema(request_body=StudyRequestSerializer, responses={202: StudyRunSerializer})
    def post(self, request, *args, **kwargs):
        serializer = StudyRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)

        try:
            cfg = build_study_config(**serializer.validated_data)
        except SplineError as e:
            return error_response(e)

        run = StudyRun.objects.create(study=cfg.study, config=cfg.describe())
        run_study_task.delay(str(run.id))
        logger.info(f"Queued {cfg.study} study run {run.id}")

        run.refresh_from_db()
        return Response(StudyRunSerializer(run).data, status=status.HTTP_202_ACCEPTED)


class StudyRunDetailView(generics.RetrieveAPIView):
    """
    Status and summary of one study run
    """
    permission_classes = [permissions.AllowAny]
    serializer_class = StudyRunSerializer
    queryset = StudyRun.objects.all()
    lookup_field = 'id'
