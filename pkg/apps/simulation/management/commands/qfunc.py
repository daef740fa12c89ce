"""
Q 함수 격자 커맨드

사용법:
    python3 manage.py qfunc --beta=4 --times=0,85.8,171.4
"""
from apps.simulation.services import SimulationService, load_run_config

from ._base import SimulationCommand


class Command(SimulationCommand):
    help = '지정 시각의 Husimi Q 함수 격자를 qfunc_t<t>.csv 로 기록합니다.'

    default_out_subdir = 'qfunc'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--times', type=str, help='Q 함수 시각 (쉼표 구분, 그래프 시간)')
        parser.add_argument('--no-record', action='store_true', help='DB 이력 기록 생략')

    def run_command(self, options):
        overrides = self.overrides(options)
        overrides['outputs'] = ['qfunc']
        config = load_run_config(options.get('config'), overrides)
        out_dir = self.out_dir(options)
        if options.get('no_record'):
            written = SimulationService.execute_qfunc(config, out_dir)
        else:
            _run, written = SimulationService.qfunc_and_record(config, out_dir)
        for t_plot, path in sorted(written.items()):
            self.stdout.write(f't={t_plot:g}: {path}')
        self.stdout.write(self.style.SUCCESS(f'{len(written)}개 격자 기록'))
