"""
시뮬레이션 관리 명령어 공통 베이스

공통 플래그 파싱과 오류 처리를 담당합니다. SimulationError 는
stderr 에 JSON 한 줄로 출력되고 exit_code 로 종료합니다. 그 밖의 예외는
code 'unexpected' 로 감싸 같은 형식으로 출력합니다 (종료 코드 1).
"""
import json
import logging
import sys

from django.conf import settings
from django.core.management.base import BaseCommand

from apps.simulation.exceptions import ConfigurationError, SimulationError, UnexpectedError

logger = logging.getLogger(__name__)


def parse_float(value, name):
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f'{name} 값이 숫자가 아닙니다: {value}', detail={name: value})


def parse_complex(value, name='beta'):
    """'4', '4+1j', '4+1i' → complex"""
    try:
        return complex(str(value).replace(' ', '').replace('i', 'j'))
    except ValueError:
        raise ConfigurationError(f'{name} 값이 복소수가 아닙니다: {value}', detail={name: value})


def parse_list(value, parser, name):
    """쉼표 구분 목록"""
    if value is None:
        return []
    items = [item for item in str(value).split(',') if item.strip()]
    return [parser(item.strip(), name) for item in items]


class SimulationCommand(BaseCommand):
    """공통 플래그: --config --out-dir --tau --beta --t-end --dt --prominence --threshold"""

    default_out_subdir = 'run'

    def add_arguments(self, parser):
        parser.add_argument('--config', type=str, help='RunConfig JSON 경로')
        parser.add_argument('--out-dir', type=str, help='출력 경로 (기본: OUTPUT_ROOT/<명령>)')
        parser.add_argument('--tau', type=str, help='변형 파라미터 tau')
        parser.add_argument('--beta', type=str, help='코히런트 진폭 beta (복소수 허용: 4+1j)')
        parser.add_argument('--t-end', type=str, dest='t_end', help='종료 시각 (그래프 시간)')
        parser.add_argument('--dt', type=str, help='적분 스텝 (물리 시간)')
        parser.add_argument('--prominence', type=str, help='피크 prominence')
        parser.add_argument('--threshold', type=str, help='revival 포락선 임계값')

    def handle(self, *args, **options):
        try:
            self.run_command(options)
        except SimulationError as e:
            self.fail(e)
        except Exception as e:
            logger.exception('명령 실행 중 예외')
            self.fail(UnexpectedError(e))

    def fail(self, error):
        self.stderr.write(json.dumps(error.to_dict(), ensure_ascii=False, default=str))
        sys.exit(error.exit_code)

    def run_command(self, options):
        raise NotImplementedError

    # ------------------------------------------------------------------
    # 공통 헬퍼
    # ------------------------------------------------------------------
    def out_dir(self, options):
        return options.get('out_dir') or str(
            settings.SIMULATION['OUTPUT_ROOT'] / self.default_out_subdir
        )

    def overrides(self, options, *, scalar_params=True):
        """CLI 플래그 → RunConfig override dict (지정된 값만)"""
        params = {}
        if scalar_params:
            if options.get('tau') is not None:
                params['tau'] = parse_float(options['tau'], 'tau')
            if options.get('beta') is not None:
                beta = parse_complex(options['beta'])
                params['beta'] = [beta.real, beta.imag]
        overrides = {'params': params}
        if options.get('t_end') is not None:
            overrides['t_end_plot'] = parse_float(options['t_end'], 't_end')
        if options.get('dt') is not None:
            overrides['dt'] = parse_float(options['dt'], 'dt')
        if options.get('prominence') is not None:
            overrides['prominence'] = parse_float(options['prominence'], 'prominence')
        if options.get('threshold') is not None:
            overrides['revival_threshold'] = parse_float(options['threshold'], 'threshold')
        if options.get('times') is not None:
            overrides['qfunc_times'] = parse_list(options['times'], parse_float, 'times')
        return overrides
