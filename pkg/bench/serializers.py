from rest_framework import serializers

from .harness import BenchRecord


class BenchRecordSerializer(serializers.Serializer):
    """One row of a TSV bench report"""

    scenario = serializers.CharField()
    n = serializers.IntegerField(min_value=1)
    T = serializers.IntegerField(source="tests", min_value=1)
    method = serializers.CharField()
    mean_seconds = serializers.FloatField(min_value=0)
    normalized = serializers.FloatField(min_value=0)

    def create(self, validated_data):
        return BenchRecord(**validated_data)
