from rest_framework import serializers

from .services.penalty import FLAVORS


class KnotPlacementSerializer(serializers.Serializer):
    """
    Serializer for automatic knot placement requests
    """
    strategy = serializers.ChoiceField(choices=['uniform', 'quantile'])
    k = serializers.IntegerField(min_value=0)
    d = serializers.IntegerField(min_value=1, default=4)
    domain = serializers.ListField(
        child=serializers.FloatField(), min_length=2, max_length=2, required=False
    )
    x = serializers.ListField(child=serializers.FloatField(), required=False)

    def validate(self, attrs):
        if attrs['strategy'] == 'quantile' and len(attrs.get('x') or []) < 2:
            raise serializers.ValidationError({'x': 'Quantile knots need at least two observations.'})
        if attrs['strategy'] == 'uniform' and not attrs.get('domain') and not attrs.get('x'):
            raise serializers.ValidationError({'domain': 'Uniform knots need a domain or observations.'})
        return attrs


class KnotVectorSerializer(serializers.Serializer):
    """
    A raw knot sequence together with its spline order
    """
    t = serializers.ListField(child=serializers.FloatField(), min_length=1)
    d = serializers.IntegerField(min_value=1)


class PenaltyRequestSerializer(KnotVectorSerializer):
    m = serializers.IntegerField(min_value=1)
    flavor = serializers.ChoiceField(choices=list(FLAVORS), default='derivative')
    include_triplets = serializers.BooleanField(default=False)
