# Generated by Django 4.2.27 on 2026-10-18 10:02

from django.db import migrations, models
import django.db.models.deletion


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='SweepJob',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('out_dir', models.CharField(max_length=500, verbose_name='출력 경로')),
                ('tau_list', models.JSONField(default=list, verbose_name='tau 목록')),
                ('beta_list', models.JSONField(default=list, verbose_name='beta 목록')),
                ('base_config', models.JSONField(default=dict, verbose_name='기본 설정')),
                ('status', models.CharField(choices=[('RUNNING', '실행중'), ('COMPLETED', '완료'), ('PARTIAL', '일부 실패')], default='RUNNING', max_length=20, verbose_name='상태')),
                ('cell_count', models.PositiveIntegerField(default=0, verbose_name='셀 수')),
                ('failed_count', models.PositiveIntegerField(default=0, verbose_name='실패 셀 수')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='시작일시')),
                ('completed_at', models.DateTimeField(blank=True, null=True, verbose_name='완료일시')),
            ],
            options={
                'verbose_name': '스윕',
                'verbose_name_plural': '스윕',
                'db_table': 'simulation_sweep_jobs',
                'ordering': ['-created_at'],
            },
        ),
        migrations.CreateModel(
            name='SimulationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('kind', models.CharField(choices=[('RUN', '시뮬레이션'), ('QFUNC', 'Q 함수'), ('SWEEP_CELL', '스윕 셀')], default='RUN', max_length=20, verbose_name='종류')),
                ('status', models.CharField(choices=[('PENDING', '대기'), ('RUNNING', '실행중'), ('COMPLETED', '완료'), ('FAILED', '실패')], db_index=True, default='PENDING', max_length=20, verbose_name='상태')),
                ('params', models.JSONField(default=dict, verbose_name='설정')),
                ('tau', models.FloatField(default=0.0, verbose_name='tau')),
                ('beta_re', models.FloatField(default=0.0, verbose_name='beta (실수부)')),
                ('beta_im', models.FloatField(default=0.0, verbose_name='beta (허수부)')),
                ('out_dir', models.CharField(max_length=500, verbose_name='출력 경로')),
                ('max_norm_drift', models.FloatField(blank=True, null=True, verbose_name='최대 노름 드리프트')),
                ('max_energy_drift', models.FloatField(blank=True, null=True, verbose_name='최대 에너지 드리프트')),
                ('max_tail_occupancy', models.FloatField(blank=True, null=True, verbose_name='최대 상단 점유율')),
                ('revival_contrast', models.FloatField(blank=True, null=True, verbose_name='revival 대비')),
                ('error_code', models.CharField(blank=True, default='', max_length=50, verbose_name='오류 코드')),
                ('error_message', models.TextField(blank=True, default='', verbose_name='오류 메시지')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='등록일시')),
                ('completed_at', models.DateTimeField(blank=True, null=True, verbose_name='완료일시')),
                ('sweep', models.ForeignKey(blank=True, null=True, on_delete=django.db.models.deletion.CASCADE, related_name='runs', to='simulation.sweepjob', verbose_name='스윕')),
            ],
            options={
                'verbose_name': '시뮬레이션 실행',
                'verbose_name_plural': '시뮬레이션 실행',
                'db_table': 'simulation_runs',
                'ordering': ['-created_at'],
            },
        ),
        migrations.CreateModel(
            name='PeakRecordEntry',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('t_plot', models.FloatField(verbose_name='t')),
                ('s_value', models.FloatField(verbose_name='S(P)')),
                ('kind', models.CharField(choices=[('initial', '초기 상태'), ('revival', 'revival'), ('collapse', 'collapse'), ('unclassified', '미분류')], max_length=20, verbose_name='종류')),
                ('envelope_amplitude', models.FloatField(default=0.0, verbose_name='포락선 진폭')),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='peaks', to='simulation.simulationrun', verbose_name='실행')),
            ],
            options={
                'verbose_name': '피크',
                'verbose_name_plural': '피크',
                'db_table': 'simulation_peaks',
                'ordering': ['run', 't_plot'],
            },
        ),
    ]
