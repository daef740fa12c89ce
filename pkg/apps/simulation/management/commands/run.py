"""
시뮬레이션 실행 커맨드

사용법:
    python3 manage.py run --beta=4 --tau=0.004 --out-dir=output/b4_t004
    python3 manage.py run --config=run.json --times=0,67.8,133.2 --xlsx
"""
import os

from apps.simulation import analysis
from apps.simulation.excel import peak_workbook, save_workbook
from apps.simulation.services import SimulationService, load_run_config

from ._base import SimulationCommand


class Command(SimulationCommand):
    help = '캣 상태와 두 분기를 전개하고 시계열·피크·Q 함수 파일을 기록합니다.'

    default_out_subdir = 'run'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--times', type=str, help='Q 함수 시각 (쉼표 구분, 그래프 시간)')
        parser.add_argument('--xlsx', action='store_true', help='peaks.xlsx 도 기록')
        parser.add_argument('--no-record', action='store_true', help='DB 이력 기록 생략')

    def run_command(self, options):
        config = load_run_config(options.get('config'), self.overrides(options))
        out_dir = self.out_dir(options)

        if options.get('no_record'):
            result = SimulationService.execute_run(config, out_dir)
        else:
            _run, result = SimulationService.run_and_record(config, out_dir)

        report = analysis.peak_table(result.records)
        if options.get('xlsx'):
            save_workbook(peak_workbook(result.records), os.path.join(out_dir, 'peaks.xlsx'))

        summary = result.summary()
        self.stdout.write(report.text)
        self.stdout.write(
            f"노름 드리프트 {summary['max_norm_drift']:.2e}, "
            f"에너지 드리프트 {summary['max_energy_drift']:.2e}, "
            f"상단 점유율 {summary['max_tail_occupancy']:.2e}"
        )
        self.stdout.write(self.style.SUCCESS(f'완료: {out_dir}'))
