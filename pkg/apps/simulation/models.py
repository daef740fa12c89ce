"""
시뮬레이션 실행 이력 모델

출력 파일은 out_dir 에 쓰이고, DB 에는 파라미터·상태·진단값만 남깁니다.
"""
from django.db import models
from django.utils import timezone


class SweepJob(models.Model):
    """파라미터 스윕 (τ × β 격자) 한 건"""

    STATUS_CHOICES = [
        ('RUNNING', '실행중'),
        ('COMPLETED', '완료'),
        ('PARTIAL', '일부 실패'),
    ]

    out_dir = models.CharField('출력 경로', max_length=500)
    tau_list = models.JSONField('tau 목록', default=list)
    beta_list = models.JSONField('beta 목록', default=list)
    base_config = models.JSONField('기본 설정', default=dict)
    status = models.CharField('상태', max_length=20, choices=STATUS_CHOICES, default='RUNNING')
    cell_count = models.PositiveIntegerField('셀 수', default=0)
    failed_count = models.PositiveIntegerField('실패 셀 수', default=0)

    created_at = models.DateTimeField('시작일시', auto_now_add=True)
    completed_at = models.DateTimeField('완료일시', null=True, blank=True)

    class Meta:
        verbose_name = '스윕'
        verbose_name_plural = '스윕'
        db_table = 'simulation_sweep_jobs'
        ordering = ['-created_at']

    def __str__(self):
        return f'Sweep #{self.pk} ({self.cell_count} cells)'

    def finish(self, failed_count):
        self.failed_count = failed_count
        self.status = 'PARTIAL' if failed_count else 'COMPLETED'
        self.completed_at = timezone.now()
        self.save(update_fields=['failed_count', 'status', 'completed_at'])


class SimulationRun(models.Model):
    """run / qfunc / 스윕 셀 한 번의 실행 기록"""

    KIND_CHOICES = [
        ('RUN', '시뮬레이션'),
        ('QFUNC', 'Q 함수'),
        ('SWEEP_CELL', '스윕 셀'),
    ]

    STATUS_CHOICES = [
        ('PENDING', '대기'),
        ('RUNNING', '실행중'),
        ('COMPLETED', '완료'),
        ('FAILED', '실패'),
    ]

    kind = models.CharField('종류', max_length=20, choices=KIND_CHOICES, default='RUN')
    status = models.CharField(
        '상태', max_length=20, choices=STATUS_CHOICES, default='PENDING', db_index=True,
    )
    sweep = models.ForeignKey(
        SweepJob, on_delete=models.CASCADE,
        null=True, blank=True,
        related_name='runs', verbose_name='스윕',
    )
    params = models.JSONField('설정', default=dict)
    tau = models.FloatField('tau', default=0.0)
    beta_re = models.FloatField('beta (실수부)', default=0.0)
    beta_im = models.FloatField('beta (허수부)', default=0.0)
    out_dir = models.CharField('출력 경로', max_length=500)

    max_norm_drift = models.FloatField('최대 노름 드리프트', null=True, blank=True)
    max_energy_drift = models.FloatField('최대 에너지 드리프트', null=True, blank=True)
    max_tail_occupancy = models.FloatField('최대 상단 점유율', null=True, blank=True)
    revival_contrast = models.FloatField('revival 대비', null=True, blank=True)
    error_code = models.CharField('오류 코드', max_length=50, blank=True, default='')
    error_message = models.TextField('오류 메시지', blank=True, default='')

    created_at = models.DateTimeField('등록일시', auto_now_add=True)
    completed_at = models.DateTimeField('완료일시', null=True, blank=True)

    class Meta:
        verbose_name = '시뮬레이션 실행'
        verbose_name_plural = '시뮬레이션 실행'
        db_table = 'simulation_runs'
        ordering = ['-created_at']

    def __str__(self):
        return f'{self.get_kind_display()} #{self.pk} (tau={self.tau:g}, beta={self.beta_re:g})'

    def mark_running(self):
        self.status = 'RUNNING'
        self.save(update_fields=['status'])

    def mark_completed(self, summary):
        self.status = 'COMPLETED'
        self.max_norm_drift = summary.get('max_norm_drift')
        self.max_energy_drift = summary.get('max_energy_drift')
        self.max_tail_occupancy = summary.get('max_tail_occupancy')
        self.revival_contrast = summary.get('revival_contrast')
        self.completed_at = timezone.now()
        self.save(update_fields=[
            'status', 'max_norm_drift', 'max_energy_drift',
            'max_tail_occupancy', 'revival_contrast', 'completed_at',
        ])

    def mark_failed(self, code, message):
        self.status = 'FAILED'
        self.error_code = code
        self.error_message = message
        self.completed_at = timezone.now()
        self.save(update_fields=['status', 'error_code', 'error_message', 'completed_at'])


class PeakRecordEntry(models.Model):
    """실행에서 검출된 S(P) 피크 한 개"""

    KIND_CHOICES = [
        ('initial', '초기 상태'),
        ('revival', 'revival'),
        ('collapse', 'collapse'),
        ('unclassified', '미분류'),
    ]

    run = models.ForeignKey(
        SimulationRun, on_delete=models.CASCADE,
        related_name='peaks', verbose_name='실행',
    )
    t_plot = models.FloatField('t')
    s_value = models.FloatField('S(P)')
    kind = models.CharField('종류', max_length=20, choices=KIND_CHOICES)
    envelope_amplitude = models.FloatField('포락선 진폭', default=0.0)

    class Meta:
        verbose_name = '피크'
        verbose_name_plural = '피크'
        db_table = 'simulation_peaks'
        ordering = ['run', 't_plot']
