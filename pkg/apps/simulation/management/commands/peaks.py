"""
피크 재분석 커맨드

사용법:
    python3 manage.py peaks --out-dir=output/run                 # output/run/timeseries.csv
    python3 manage.py peaks --timeseries=a/timeseries.csv --prominence=0.03
"""
import os

from apps.simulation.exceptions import ConfigurationError
from apps.simulation.services import SimulationService, load_run_config

from ._base import SimulationCommand


class Command(SimulationCommand):
    help = '기존 timeseries.csv 에서 S(P) 피크를 다시 검출·분류해 peaks.csv 를 기록합니다.'

    default_out_subdir = 'run'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--timeseries', type=str, help='timeseries.csv 경로 (기본: <out-dir>/timeseries.csv)')

    def run_command(self, options):
        config = load_run_config(options.get('config'), self.overrides(options))
        out_dir = self.out_dir(options)
        path = options.get('timeseries') or os.path.join(out_dir, 'timeseries.csv')
        if not os.path.exists(path):
            raise ConfigurationError(f'시계열 파일이 없습니다: {path}', detail={'path': path})

        report = SimulationService.reanalyze_peaks(
            path, out_dir,
            smooth_window=config.smooth_window,
            prominence=config.prominence,
            window=config.envelope_window,
            threshold=config.revival_threshold,
        )
        self.stdout.write(report.text)
        self.stdout.write(self.style.SUCCESS(f'완료: {os.path.join(out_dir, "peaks.csv")}'))
