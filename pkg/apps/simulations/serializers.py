from rest_framework import serializers

from .models import StudyRun
from .services.studies import STUDIES


class StudyRequestSerializer(serializers.Serializer):
    """
    Study parameters; omitted values take the study's defaults
    """
    study = serializers.ChoiceField(choices=list(STUDIES))
    N = serializers.IntegerField(min_value=1, required=False)
    n = serializers.IntegerField(min_value=10, required=False)
    d = serializers.IntegerField(min_value=2, required=False)
    k = serializers.IntegerField(min_value=0, required=False)
    m = serializers.ListField(child=serializers.IntegerField(min_value=1), required=False, allow_empty=False)
    gamma = serializers.FloatField(min_value=0.0, required=False)
    seed = serializers.IntegerField(required=False)


class StudyRunSerializer(serializers.ModelSerializer):
    """
    Serializer for queued and finished study runs
    """
    study_display = serializers.CharField(source='get_study_display', read_only=True)
    status_display = serializers.CharField(source='get_status_display', read_only=True)

    class Meta:
        model = StudyRun
        fields = [
            'id', 'study', 'study_display', 'status', 'status_display', 'config',
            'summary', 'failure_count', 'error_message', 'started_at',
            'completed_at', 'processing_time', 'created_at'
        ]
        read_only_fields = fields
