from rest_framework import serializers

from apps.core.conf import mfdea_setting
from apps.core.exceptions import ConfigurationError
from apps.fluctuations.types import ScaleSet
from apps.histogram.types import BinWidthRule
from apps.levy.types import MuProfile

from .models import AnalysisRun
from .types import Generator, OutputFormat, RunConfig, Transform


def _choices(enum_class):
    return [member.value for member in enum_class]


class RunConfigSerializer(serializers.Serializer):
    """
    Validates a run request from the command line or the API.

    File input is only accepted when the caller passes ``allow_path`` in
    the serializer context.
    """
    input = serializers.CharField(required=False, allow_null=True)
    values = serializers.ListField(child=serializers.FloatField(), required=False, allow_empty=False)
    generator = serializers.ChoiceField(choices=_choices(Generator), required=False, allow_null=True)
    length = serializers.IntegerField(min_value=2, default=16384)
    mu = serializers.FloatField(default=1.5)
    mu_profile = serializers.CharField(required=False, allow_null=True)
    base_scale = serializers.IntegerField(min_value=1, default=1)
    column = serializers.CharField(default='0')
    transform = serializers.ChoiceField(choices=_choices(Transform), default=Transform.NONE.value)
    rule = serializers.CharField(default='scott')
    q_min = serializers.FloatField(required=False, allow_null=True)
    q_max = serializers.FloatField(required=False, allow_null=True)
    q_step = serializers.FloatField(required=False, allow_null=True)
    allow_negative_q = serializers.BooleanField(default=False)
    scales = serializers.CharField(default='auto')
    compat = serializers.BooleanField(default=False)
    seed = serializers.IntegerField(min_value=0, default=0)
    format = serializers.ChoiceField(choices=_choices(OutputFormat), default=OutputFormat.JSON.value)
    emit_surface = serializers.BooleanField(default=False)

    def validate_rule(self, value):
        try:
            return BinWidthRule.parse(value)
        except ConfigurationError as exc:
            raise serializers.ValidationError(exc.message)

    def validate_mu(self, value):
        if not 0 < value <= 2:
            raise serializers.ValidationError('Stability index must lie in (0, 2]')
        return value

    def validate_mu_profile(self, value):
        if value is None:
            return None
        try:
            return MuProfile.parse(value)
        except ConfigurationError as exc:
            raise serializers.ValidationError(exc.message)

    def validate_scales(self, value):
        if value.strip().lower() == 'auto':
            return None
        try:
            scales = tuple(int(chunk) for chunk in value.split(',') if chunk.strip())
            return ScaleSet(scales).scales
        except ValueError:
            raise serializers.ValidationError(f"Cannot parse scales '{value}'")
        except ConfigurationError as exc:
            raise serializers.ValidationError(exc.message)

    def validate(self, attrs):
        sources = [name for name in ('input', 'values', 'generator') if attrs.get(name) is not None]
        if len(sources) != 1:
            raise serializers.ValidationError('Give exactly one of input, values or generator')
        if attrs.get('input') is not None and not self.context.get('allow_path'):
            raise serializers.ValidationError({'input': 'File input is not available here'})

        q_min = attrs.get('q_min')
        q_max = attrs.get('q_max')
        q_step = attrs.get('q_step')
        q_min = mfdea_setting('DEFAULT_Q_MIN') if q_min is None else q_min
        q_max = mfdea_setting('DEFAULT_Q_MAX') if q_max is None else q_max
        q_step = mfdea_setting('DEFAULT_Q_STEP') if q_step is None else q_step
        if not q_step > 0:
            raise serializers.ValidationError({'q_step': 'q_step must be positive'})
        if q_min > q_max:
            raise serializers.ValidationError({'q_min': 'q_min must not exceed q_max'})
        if q_min < 0 and not attrs.get('allow_negative_q'):
            raise serializers.ValidationError({'q_min': 'Negative q needs allow_negative_q'})
        attrs.update(q_min=q_min, q_max=q_max, q_step=q_step)

        if attrs.get('generator') == Generator.MULTISCALE.value and attrs.get('mu_profile') is None:
            attrs['mu_profile'] = MuProfile.constant(attrs['mu'])
        return attrs

    def to_config(self) -> RunConfig:
        data = self.validated_data
        values = data.get('values')
        generator = data.get('generator')
        return RunConfig(
            input_path=data.get('input'),
            values=tuple(values) if values is not None else None,
            generator=Generator(generator) if generator else None,
            length=data['length'],
            mu=data['mu'],
            mu_profile=data.get('mu_profile'),
            base_scale=data['base_scale'],
            column=data['column'],
            transform=Transform(data['transform']),
            rule=data['rule'],
            q_min=data['q_min'],
            q_max=data['q_max'],
            q_step=data['q_step'],
            allow_negative_q=data['allow_negative_q'],
            scales=data['scales'],
            compat=data['compat'],
            seed=data['seed'],
            output_format=OutputFormat(data['format']),
            emit_surface=data['emit_surface'],
        )


class SpectrumRecordSerializer(serializers.Serializer):
    """
    One per-q record; undefined values are null.
    """
    q = serializers.FloatField()
    h_star = serializers.FloatField(allow_null=True)
    delta = serializers.FloatField(allow_null=True)
    stderr = serializers.FloatField(allow_null=True)
    ci99_low = serializers.FloatField(allow_null=True)
    ci99_high = serializers.FloatField(allow_null=True)
    r2 = serializers.FloatField(allow_null=True)
    tau = serializers.FloatField(allow_null=True)
    alpha = serializers.FloatField(allow_null=True)
    f_alpha = serializers.FloatField(allow_null=True)
    d_q = serializers.FloatField(allow_null=True)
    warnings = serializers.ListField(child=serializers.CharField())


class AnalysisRunSummarySerializer(serializers.ModelSerializer):
    """
    Serializer for run listings
    """
    q_count = serializers.IntegerField(read_only=True)

    class Meta:
        model = AnalysisRun
        fields = ('id', 'source', 'rule', 'status', 'series_length', 'q_count', 'created_at')
        read_only_fields = fields


class AnalysisRunSerializer(serializers.ModelSerializer):
    """
    Serializer for a single run with its records
    """
    records = SpectrumRecordSerializer(many=True, read_only=True)

    class Meta:
        model = AnalysisRun
        fields = (
            'id', 'source', 'rule', 'status', 'series_length', 'config',
            'records', 'metadata', 'error', 'created_at', 'updated_at',
        )
        read_only_fields = fields
