from rest_framework import serializers

from .models import RunReport


class RunReportSerializer(serializers.ModelSerializer):
    class Meta:
        model = RunReport
        fields = [
            'run_id', 'command', 'poly_spec', 'method',
            'config', 'values', 'diagnostics', 'seconds', 'created_at',
        ]
        read_only_fields = ['run_id', 'created_at']


class RegistryRowSerializer(serializers.Serializer):
    row_id = serializers.CharField()
    kind = serializers.ChoiceField(choices=['P', 'Q', 'R', 'S', 'T', 'bracket'])
    label = serializers.CharField()
    params = serializers.ListField(child=serializers.JSONField())
    expected_M = serializers.FloatField(min_value=1)
    expected_LC = serializers.FloatField(min_value=0, max_value=1)
    expected_LC_inv = serializers.FloatField(min_value=0, max_value=1)
    spec_unavailable = serializers.BooleanField()


class TableRowSerializer(serializers.Serializer):
    row_id = serializers.CharField()
    kind = serializers.CharField()
    params = serializers.CharField()
    method = serializers.CharField()
    lc = serializers.FloatField(allow_null=True)
    lc_expected = serializers.FloatField()
    delta = serializers.FloatField(allow_null=True)
    lc_inv = serializers.FloatField(allow_null=True)
    lc_inv_expected = serializers.FloatField()
    delta_inv = serializers.FloatField(allow_null=True)
    seconds = serializers.FloatField()
    errors = serializers.ListField(child=serializers.CharField())
