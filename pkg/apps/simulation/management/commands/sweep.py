"""
파라미터 스윕 커맨드

사용법:
    python3 manage.py sweep                                  # 기본 격자 4 tau × 2 beta
    python3 manage.py sweep --tau=0,0.004,0.1 --beta=4 --xlsx
"""
from apps.simulation.services import SimulationService, best_contrast_cells, load_run_config

from ._base import SimulationCommand, parse_complex, parse_float, parse_list


class Command(SimulationCommand):
    help = 'tau × beta 교차 격자를 동시에 실행하고 summary.csv 를 기록합니다.'

    default_out_subdir = 'sweep'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--xlsx', action='store_true', help='summary.xlsx 도 기록')
        parser.add_argument('--no-notify', action='store_true', help='Slack 알림 생략')

    def run_command(self, options):
        base = load_run_config(options.get('config'), self.overrides(options, scalar_params=False))
        tau_list = parse_list(options.get('tau'), parse_float, 'tau')
        beta_list = parse_list(options.get('beta'), lambda v, _n: parse_complex(v), 'beta')
        out_dir = self.out_dir(options)

        job, results = SimulationService.sweep(
            base, tau_list, beta_list, out_dir,
            xlsx=options.get('xlsx', False),
            notify=not options.get('no_notify', False),
        )

        rows = SimulationService.summary_rows(results)
        for row in rows:
            line = (
                f"tau={float(row['tau']):g} beta={float(row['beta_re']):g}"
                f" {row['status']} revivals={row['revival_count']} contrast={row['revival_contrast'] or '-'}"
            )
            self.stdout.write(line if row['status'] == 'COMPLETED' else self.style.WARNING(line))
        for beta, tau in sorted(best_contrast_cells(rows).items()):
            self.stdout.write(f'beta={float(beta):g}: 최대 revival 대비 tau={tau:g}')

        style = self.style.WARNING if job.failed_count else self.style.SUCCESS
        self.stdout.write(style(f'스윕 완료: {job.cell_count}셀, 실패 {job.failed_count} ({out_dir})'))
