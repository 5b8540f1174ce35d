from rest_framework import serializers

from apps.splines.services.penalty import FLAVORS

from .models import FitRun


class FitRequestSerializer(serializers.Serializer):
    """
    Observations plus fit options; ``lam`` omitted means GCV selection
    """
    x = serializers.ListField(child=serializers.FloatField(), min_length=2)
    y = serializers.ListField(child=serializers.FloatField(), min_length=2)
    knot_strategy = serializers.ChoiceField(choices=['uniform', 'quantile', 'file'], default='quantile')
    k = serializers.IntegerField(min_value=0, default=10)
    d = serializers.IntegerField(min_value=1, default=4)
    m = serializers.IntegerField(min_value=1, default=2)
    flavor = serializers.ChoiceField(choices=list(FLAVORS), default='difference-general')
    lam = serializers.FloatField(min_value=0.0, required=False, allow_null=True)
    force_naive = serializers.BooleanField(default=False)
    domain = serializers.ListField(
        child=serializers.FloatField(), min_length=2, max_length=2, required=False
    )
    knots = serializers.ListField(child=serializers.FloatField(), required=False)
    grid_points = serializers.IntegerField(min_value=2, required=False)

    def validate(self, attrs):
        if len(attrs['x']) != len(attrs['y']):
            raise serializers.ValidationError({'y': 'x and y must have the same length.'})
        if attrs['knot_strategy'] == 'file' and not attrs.get('knots'):
            raise serializers.ValidationError({'knots': 'Required when knot_strategy is "file".'})
        return attrs


class FitRunSerializer(serializers.ModelSerializer):
    """
    Serializer for recorded fits
    """
    flavor_display = serializers.CharField(source='get_flavor_display', read_only=True)

    class Meta:
        model = FitRun
        fields = [
            'id', 'status', 'flavor', 'flavor_display', 'options', 'n', 'p',
            'selected_lambda', 'edf', 'gcv', 'rss', 'flat_gcv',
            'error_message', 'processing_time', 'created_at'
        ]
        read_only_fields = fields
