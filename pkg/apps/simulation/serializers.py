"""
시뮬레이션 시리얼라이저

RunConfig JSON 검증과 실행 이력 조회 API 직렬화를 담당합니다.
"""
import math

from rest_framework import serializers

from .analysis import KIND_CHOICES
from .dynamics import STEP_GUARD
from .models import PeakRecordEntry, SimulationRun, SweepJob

OUTPUT_CHOICES = ('timeseries', 'qfunc', 'peaks')


class ComplexField(serializers.Field):
    """복소수: 숫자, [re, im], {"re": .., "im": ..} 를 받아 complex 로 변환"""

    default_error_messages = {
        'invalid': '복소수는 숫자, [re, im] 또는 {{"re", "im"}} 형식이어야 합니다.',
        'not_finite': '복소수 성분은 유한해야 합니다.',
    }

    def to_internal_value(self, data):
        try:
            if isinstance(data, bool):
                raise TypeError
            if isinstance(data, (int, float)):
                value = complex(float(data), 0.0)
            elif isinstance(data, (list, tuple)) and len(data) == 2:
                value = complex(float(data[0]), float(data[1]))
            elif isinstance(data, dict):
                value = complex(float(data.get('re', 0.0)), float(data.get('im', 0.0)))
            elif isinstance(data, str):
                value = complex(data.replace(' ', '').replace('i', 'j'))
            else:
                raise TypeError
        except (TypeError, ValueError):
            self.fail('invalid')
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            self.fail('not_finite')
        return value

    def to_representation(self, value):
        value = complex(value)
        return [value.real, value.imag]


# ------------------------------------------------------------------
# RunConfig 검증
# ------------------------------------------------------------------

class SystemParamsSerializer(serializers.Serializer):
    omega_bar = serializers.FloatField()
    delta_bar = serializers.FloatField()
    epsilon = serializers.FloatField(min_value=0.0)
    beta = ComplexField()
    phi = serializers.FloatField()
    tau = serializers.FloatField()
    n_max = serializers.IntegerField(min_value=1)

    def validate_omega_bar(self, value):
        if value <= 0:
            raise serializers.ValidationError('omega_bar는 양수여야 합니다.')
        return value

    def validate_tau(self, value):
        if not math.isfinite(value):
            raise serializers.ValidationError('tau는 유한한 실수여야 합니다.')
        return value


class QWindowSerializer(serializers.Serializer):
    half_width = serializers.FloatField()
    step = serializers.FloatField()

    def validate(self, attrs):
        if attrs['half_width'] <= 0 or attrs['step'] <= 0:
            raise serializers.ValidationError('half_width, step 은 양수여야 합니다.')
        if attrs['step'] > attrs['half_width']:
            raise serializers.ValidationError('step 이 half_width 보다 큽니다.')
        return attrs


class RunConfigSerializer(serializers.Serializer):
    """설정 기본값 · JSON 파일 · CLI 플래그를 병합한 최종 dict 를 검증"""

    params = SystemParamsSerializer()
    t_end_plot = serializers.FloatField()
    sample_spacing_plot = serializers.FloatField()
    dt = serializers.FloatField()
    outputs = serializers.ListField(
        child=serializers.ChoiceField(choices=OUTPUT_CHOICES), allow_empty=True,
    )
    qfunc_times = serializers.ListField(child=serializers.FloatField(min_value=0.0), allow_empty=True)
    qfunc_window = QWindowSerializer()
    smooth_window = serializers.FloatField(min_value=0.0)
    prominence = serializers.FloatField()
    envelope_window = serializers.FloatField()
    revival_threshold = serializers.FloatField()
    norm_drift_abort = serializers.FloatField()
    tail_warn = serializers.FloatField()
    tail_error = serializers.FloatField()

    def validate_t_end_plot(self, value):
        if value <= 0:
            raise serializers.ValidationError('t_end_plot은 양수여야 합니다.')
        return value

    def validate_sample_spacing_plot(self, value):
        if value <= 0:
            raise serializers.ValidationError('sample_spacing_plot은 양수여야 합니다.')
        return value

    def validate_prominence(self, value):
        if value <= 0:
            raise serializers.ValidationError('prominence는 양수여야 합니다.')
        return value

    def validate(self, attrs):
        dt = attrs['dt']
        omega_bar = attrs['params']['omega_bar']
        if dt <= 0:
            raise serializers.ValidationError({'dt': 'dt는 양수여야 합니다.'})
        if omega_bar * dt > STEP_GUARD:
            raise serializers.ValidationError({
                'dt': f'스텝 가드 위반: omega_bar·dt = {omega_bar * dt:.3g} > {STEP_GUARD}',
            })
        for key in ('envelope_window', 'revival_threshold', 'norm_drift_abort', 'tail_warn', 'tail_error'):
            if attrs[key] <= 0:
                raise serializers.ValidationError({key: f'{key}는 양수여야 합니다.'})
        if attrs['tail_error'] < attrs['tail_warn']:
            raise serializers.ValidationError({'tail_error': 'tail_error 는 tail_warn 이상이어야 합니다.'})
        late = [t for t in attrs['qfunc_times'] if t > attrs['t_end_plot']]
        if late:
            raise serializers.ValidationError({'qfunc_times': f't_end_plot 이후 시각: {late}'})
        return attrs


# ------------------------------------------------------------------
# 조회용
# ------------------------------------------------------------------

class PeakRecordEntrySerializer(serializers.ModelSerializer):
    kind = serializers.ChoiceField(choices=KIND_CHOICES)

    class Meta:
        model = PeakRecordEntry
        fields = ['id', 't_plot', 's_value', 'kind', 'envelope_amplitude']


class SimulationRunListSerializer(serializers.ModelSerializer):
    kind_display = serializers.CharField(source='get_kind_display', read_only=True)
    status_display = serializers.CharField(source='get_status_display', read_only=True)

    class Meta:
        model = SimulationRun
        fields = [
            'id', 'kind', 'kind_display', 'status', 'status_display',
            'tau', 'beta_re', 'beta_im', 'sweep', 'created_at', 'completed_at',
        ]


class SimulationRunDetailSerializer(serializers.ModelSerializer):
    peaks = PeakRecordEntrySerializer(many=True, read_only=True)

    class Meta:
        model = SimulationRun
        fields = [
            'id', 'kind', 'status', 'sweep', 'params',
            'tau', 'beta_re', 'beta_im', 'out_dir',
            'max_norm_drift', 'max_energy_drift', 'max_tail_occupancy',
            'revival_contrast', 'error_code', 'error_message',
            'created_at', 'completed_at', 'peaks',
        ]


class SweepJobSerializer(serializers.ModelSerializer):
    class Meta:
        model = SweepJob
        fields = [
            'id', 'out_dir', 'tau_list', 'beta_list', 'status',
            'cell_count', 'failed_count', 'created_at', 'completed_at',
        ]
