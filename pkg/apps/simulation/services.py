"""
시뮬레이션 서비스 레이어

RunConfig 로딩, 세 궤적(캣 + 분기 2개) 동시 전개, 출력 파일 기록,
파라미터 스윕을 담당합니다. 관리 명령어와 Celery 태스크는 이 서비스만 호출합니다.

출력 파일에는 타임스탬프나 DB id 를 쓰지 않으므로 같은 설정의 반복 실행은
바이트 단위로 같은 결과를 냅니다.
"""
import copy
import csv
import itertools
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings
from django.db import transaction

from . import analysis
from .dynamics import (
    RK4Propagator,
    SystemParams,
    build_generator,
    evolve,
    initial_branch_state,
    initial_cat_state,
    plot_to_physical,
    sample_grid,
)
from .excel import DRIFT_FORMAT, VALUE_FORMAT, Column, build_workbook, save_workbook
from .exceptions import ConfigurationError, SimulationError, TruncationLeakError, UnexpectedError
from .interaction import fq_matrix
from .models import PeakRecordEntry, SimulationRun, SweepJob
from .observables import find_lobes, observable_series, q_function, window_axes
from .qalgebra import DeformationParam, mean_f_of_n
from .serializers import RunConfigSerializer

logger = logging.getLogger(__name__)

META_FORMAT_VERSION = 1

TIMESERIES_HEADER = (
    't_plot', 'P_g', 'P_e', 'I', 're_C', 'im_C',
    'P_g1', 'P_e1', 'P_g2', 'P_e2', 'S_P',
)
ENVELOPE_HEADER = (
    't_plot', 'envelope', 's_c', 'norm_drift', 'energy_drift', 'tail_occupancy',
)
QFUNC_HEADER = ('alpha_re', 'alpha_im', 'q')

SUMMARY_COLUMNS = [
    Column('tau', 'tau', 10, '0.0000'),
    Column('beta_re', 'beta (re)', 10, '0.00'),
    Column('beta_im', 'beta (im)', 10, '0.00'),
    Column('status', '상태', 12),
    Column('revival_count', 'revival 수', 12, '0'),
    Column('collapse_count', 'collapse 수', 12, '0'),
    Column('revival_contrast', 'revival 대비', 14, '0.000'),
    Column('revival_monotone', '단조 감소', 12),
    Column('max_envelope', '최대 포락선', 14, VALUE_FORMAT),
    Column('max_norm_drift', '최대 노름 드리프트', 18, DRIFT_FORMAT),
    Column('out_dir', '출력 경로', 40),
    Column('error', '오류', 40),
]

# 스윕 기본 격자
DEFAULT_SWEEP_TAUS = (0.0, 0.004, 0.0047, 0.008)
DEFAULT_SWEEP_BETAS = (3.0, 4.0)


def _num(value):
    """CSV 수치: 왕복 가능한 최단 표현"""
    return repr(float(value))


def _optional(value):
    return '' if value is None else value


# ------------------------------------------------------------------
# RunConfig
# ------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    """한 번의 실행을 완전히 결정하는 설정 (난수 없음)"""

    params: SystemParams
    t_end_plot: float = 500.0
    sample_spacing_plot: float = 0.2
    dt: float = 5e-7
    outputs: tuple = ('timeseries', 'qfunc', 'peaks')
    qfunc_times: tuple = ()
    qfunc_window: tuple = (6.0, 0.1)
    smooth_window: float = 8.0
    prominence: float = 0.02
    envelope_window: float = 10.0
    revival_threshold: float = 0.05
    norm_drift_abort: float = 1e-6
    tail_warn: float = 1e-6
    tail_error: float = 1e-2

    @classmethod
    def from_dict(cls, data):
        """RunConfigSerializer.validated_data (또는 to_dict() 결과) → RunConfig"""
        p = data['params']
        beta = p['beta']
        if isinstance(beta, (list, tuple)):
            beta = complex(beta[0], beta[1])
        params = SystemParams(
            omega_bar=float(p['omega_bar']),
            delta_bar=float(p['delta_bar']),
            epsilon=float(p['epsilon']),
            beta=complex(beta),
            phi=float(p['phi']),
            deformation=DeformationParam(float(p['tau'])),
            n_max=int(p['n_max']),
        )
        window = data['qfunc_window']
        return cls(
            params=params,
            t_end_plot=float(data['t_end_plot']),
            sample_spacing_plot=float(data['sample_spacing_plot']),
            dt=float(data['dt']),
            outputs=tuple(sorted(set(data['outputs']))),
            qfunc_times=tuple(sorted({float(t) for t in data['qfunc_times']})),
            qfunc_window=(float(window['half_width']), float(window['step'])),
            smooth_window=float(data['smooth_window']),
            prominence=float(data['prominence']),
            envelope_window=float(data['envelope_window']),
            revival_threshold=float(data['revival_threshold']),
            norm_drift_abort=float(data['norm_drift_abort']),
            tail_warn=float(data['tail_warn']),
            tail_error=float(data['tail_error']),
        )

    def to_dict(self):
        return {
            'params': self.params.to_dict(),
            't_end_plot': self.t_end_plot,
            'sample_spacing_plot': self.sample_spacing_plot,
            'dt': self.dt,
            'outputs': list(self.outputs),
            'qfunc_times': list(self.qfunc_times),
            'qfunc_window': {'half_width': self.qfunc_window[0], 'step': self.qfunc_window[1]},
            'smooth_window': self.smooth_window,
            'prominence': self.prominence,
            'envelope_window': self.envelope_window,
            'revival_threshold': self.revival_threshold,
            'norm_drift_abort': self.norm_drift_abort,
            'tail_warn': self.tail_warn,
            'tail_error': self.tail_error,
        }

    def with_cell(self, tau, beta):
        """tau / beta 만 바꾼 사본 (스윕 셀)"""
        data = self.to_dict()
        beta = complex(beta)
        data['params']['tau'] = float(tau)
        data['params']['beta'] = [beta.real, beta.imag]
        return RunConfig.from_dict(data)


def default_config_dict():
    """settings.SIMULATION 기본값으로 만든 RunConfig dict"""
    sim = settings.SIMULATION
    return {
        'params': {
            'omega_bar': sim['OMEGA_BAR'],
            'delta_bar': sim['DELTA_BAR'],
            'epsilon': sim['EPSILON'],
            'beta': sim['BETA'],
            'phi': sim['PHI'],
            'tau': sim['TAU'],
            'n_max': sim['N_MAX'],
        },
        't_end_plot': sim['T_END_PLOT'],
        'sample_spacing_plot': sim['SAMPLE_SPACING_PLOT'],
        'dt': sim['DT'],
        'outputs': ['timeseries', 'qfunc', 'peaks'],
        'qfunc_times': [],
        'qfunc_window': {'half_width': sim['QFUNC_HALF_WIDTH'], 'step': sim['QFUNC_STEP']},
        'smooth_window': sim['SMOOTH_WINDOW'],
        'prominence': sim['PROMINENCE'],
        'envelope_window': sim['ENVELOPE_WINDOW'],
        'revival_threshold': sim['REVIVAL_THRESHOLD'],
        'norm_drift_abort': sim['NORM_DRIFT_ABORT'],
        'tail_warn': sim['TAIL_WARN'],
        'tail_error': sim['TAIL_ERROR'],
    }


def _merge(base, override):
    """중첩 dict 병합 (override 우선, None 은 무시)"""
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if value is None:
            continue
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_run_config(path=None, overrides=None):
    """설정 기본값 < JSON 파일 < overrides(CLI 플래그) 순으로 병합 후 검증

    Raises:
        ConfigurationError: 파일을 읽을 수 없거나 검증에 실패한 경우
    """
    data = default_config_dict()
    if path:
        try:
            with open(path, encoding='utf-8') as fp:
                file_data = json.load(fp)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigurationError(
                f'설정 파일을 읽을 수 없습니다: {path}', detail={'path': str(path), 'reason': str(e)},
            )
        if not isinstance(file_data, dict):
            raise ConfigurationError('설정 파일 최상위는 JSON 객체여야 합니다.', detail={'path': str(path)})
        data = _merge(data, file_data)
    data = _merge(data, overrides)

    serializer = RunConfigSerializer(data=data)
    if not serializer.is_valid():
        raise ConfigurationError('RunConfig 검증 실패', detail=serializer.errors)
    return RunConfig.from_dict(serializer.validated_data)


# ------------------------------------------------------------------
# 결과 타입
# ------------------------------------------------------------------

@dataclass(frozen=True)
class SimulationResult:
    config: RunConfig
    generator: object
    coupling: object
    cat: object
    branch1: object
    branch2: object
    series: object
    records: list = field(default_factory=list)

    @property
    def trajectories(self):
        return (self.cat, self.branch1, self.branch2)

    def summary(self):
        """DB 기록·스윕 요약용 수치 (JSON 직렬화 가능)"""
        revivals = [r for r in self.records if r.kind == analysis.REVIVAL]
        collapses = [r for r in self.records if r.kind == analysis.COLLAPSE]
        envelope = [r.envelope_amplitude for r in self.records if r.kind != analysis.INITIAL]
        return {
            'max_norm_drift': max(t.max_norm_drift for t in self.trajectories),
            'max_energy_drift': max(t.max_energy_drift for t in self.trajectories),
            'max_tail_occupancy': max(t.max_tail_occupancy for t in self.trajectories),
            'revival_count': len(revivals),
            'collapse_count': len(collapses),
            'revival_contrast': analysis.revival_contrast(self.records),
            'revival_monotone': analysis.revival_monotonicity(self.records),
            'max_envelope': max(envelope) if envelope else 0.0,
            'peaks': [r.to_dict() for r in self.records],
        }


# ------------------------------------------------------------------
# 파일 기록
# ------------------------------------------------------------------

def _write_csv(path, header, rows):
    with open(path, 'w', newline='', encoding='utf-8') as fp:
        writer = csv.writer(fp, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)


def write_timeseries_csv(series, path):
    rows = (
        [
            _num(series.t_plot[i]), _num(series.P_g[i]), _num(series.P_e[i]), _num(series.I[i]),
            _num(series.C_ge[i].real), _num(series.C_ge[i].imag),
            _num(series.P_g1[i]), _num(series.P_e1[i]),
            _num(series.P_g2[i]), _num(series.P_e2[i]),
            _num(series.S_P[i]),
        ]
        for i in range(len(series))
    )
    _write_csv(path, TIMESERIES_HEADER, rows)


def write_envelope_csv(series, cat, envelope, path):
    rows = (
        [
            _num(series.t_plot[i]), _num(envelope[i]),
            '' if np.isnan(series.S_C[i]) else _num(series.S_C[i]),
            _num(cat.norm_drift[i]), _num(cat.energy_drift[i]), _num(cat.tail_occupancy[i]),
        ]
        for i in range(len(series))
    )
    _write_csv(path, ENVELOPE_HEADER, rows)


def write_qfunc_csv(grid, path):
    rows = (
        [_num(re), _num(im), _num(grid.values[i, j])]
        for i, re in enumerate(grid.alpha_re_axis)
        for j, im in enumerate(grid.alpha_im_axis)
    )
    _write_csv(path, QFUNC_HEADER, rows)


def qfunc_filename(t_plot):
    return f'qfunc_t{analysis.format_g6(t_plot)}.csv'


def read_timeseries_csv(path):
    """timeseries.csv → (t_plot, I, S_P) 배열"""
    try:
        with open(path, newline='', encoding='utf-8') as fp:
            rows = list(csv.DictReader(fp))
    except OSError as e:
        raise ConfigurationError(f'시계열 파일을 읽을 수 없습니다: {path}', detail={'reason': str(e)})
    try:
        t = np.array([float(r['t_plot']) for r in rows])
        inversion = np.array([float(r['I']) for r in rows])
        s_p = np.array([float(r['S_P']) for r in rows])
    except (KeyError, ValueError) as e:
        raise ConfigurationError(f'시계열 파일 형식 오류: {path}', detail={'reason': str(e)})
    return t, inversion, s_p


def _write_json(path, payload):
    with open(path, 'w', encoding='utf-8') as fp:
        json.dump(payload, fp, indent=2, sort_keys=True, ensure_ascii=False)
        fp.write('\n')


def _reference_offsets(comparison):
    """기준 테이블 대비 평균 시각/값 오차 (체계적 오프셋 기록용)"""
    matched = [row for row in comparison if row['t_plot'] is not None]
    if not matched:
        return None
    return {
        'mean_relative_time_offset': float(np.mean([
            (row['t_plot'] - row['reference_t']) / row['reference_t'] for row in matched
        ])),
        'mean_value_offset': float(np.mean([row['s_p'] - row['reference_s'] for row in matched])),
        'times_within_tolerance': all(row['time_ok'] for row in matched),
        'values_within_tolerance': all(row['value_ok'] for row in matched),
    }


# ------------------------------------------------------------------
# 서비스
# ------------------------------------------------------------------

class SimulationService:

    # ------------------------------------------------------------------
    # 계산
    # ------------------------------------------------------------------
    @staticmethod
    def build_system(params):
        """(CouplingMatrix, Generator, RK4Propagator)"""
        coupling = fq_matrix(params.n_max, params.epsilon, params.deformation)
        generator = build_generator(params, coupling)
        return coupling, generator, RK4Propagator(generator)

    @staticmethod
    def simulate(config):
        """캣·분기 1·분기 2 를 같은 생성자와 시간 격자에서 동시 전개"""
        params = config.params
        coupling, generator, propagator = SimulationService.build_system(params)
        t_grid = plot_to_physical(sample_grid(config.t_end_plot, config.sample_spacing_plot))
        initial_states = (
            initial_cat_state(params),
            initial_branch_state(1, params),
            initial_branch_state(2, params),
        )

        logger.info(
            '시뮬레이션 시작: tau=%g beta=%s n_max=%d t_end=%g samples=%d',
            params.tau, params.beta, params.n_max, config.t_end_plot, len(t_grid),
        )
        with ThreadPoolExecutor(max_workers=len(initial_states)) as pool:
            futures = [
                pool.submit(
                    evolve, s0, generator, t_grid,
                    dt=config.dt, propagator=propagator,
                    norm_abort=config.norm_drift_abort, tail_warn=config.tail_warn,
                )
                for s0 in initial_states
            ]
            cat, branch1, branch2 = [f.result() for f in futures]

        tail = max(cat.max_tail_occupancy, branch1.max_tail_occupancy, branch2.max_tail_occupancy)
        if tail > config.tail_error:
            raise TruncationLeakError(tail, config.tail_error)

        series = observable_series(cat, branch1, branch2)
        records = SimulationService.analyze(
            series.t_plot, series.I, series.S_P, config,
        )
        logger.info(
            '시뮬레이션 완료: tau=%g beta=%s peaks=%d max_norm_drift=%.2e',
            params.tau, params.beta, len(records), cat.max_norm_drift,
        )
        return SimulationResult(
            config=config, generator=generator, coupling=coupling,
            cat=cat, branch1=branch1, branch2=branch2,
            series=series, records=records,
        )

    @staticmethod
    def analyze(t_plot, inversion, s_p, config=None, *, smooth_window=None,
                prominence=None, window=None, threshold=None):
        """detect_peaks → classify_peaks (인자 > config > 기본값)"""
        def pick(explicit, attr, default):
            if explicit is not None:
                return explicit
            return getattr(config, attr) if config is not None else default

        peaks = analysis.detect_peaks(
            t_plot, s_p,
            smooth_window=pick(smooth_window, 'smooth_window', 8.0),
            prominence=pick(prominence, 'prominence', 0.02),
        )
        return analysis.classify_peaks(
            peaks, t_plot, inversion,
            window=pick(window, 'envelope_window', 10.0),
            threshold=pick(threshold, 'revival_threshold', 0.05),
        )

    @staticmethod
    def compute_qfunctions(config, generator=None, propagator=None):
        """config.qfunc_times 의 캣 상태 Q 격자 {t_plot: QGrid}

        요청 시각으로만 이루어진 격자에서 캣을 다시 전개하므로 샘플 격자에
        없는 시각도 정확히 계산됩니다.
        """
        params = config.params
        if generator is None:
            _coupling, generator, propagator = SimulationService.build_system(params)
        times = sorted(set(config.qfunc_times))
        if not times:
            return {}
        grid_plot = [0.0] + [t for t in times if t > 0]
        trajectory = evolve(
            initial_cat_state(params), generator, plot_to_physical(grid_plot),
            dt=config.dt, propagator=propagator,
            norm_abort=config.norm_drift_abort, tail_warn=config.tail_warn,
        )
        half_width, step = config.qfunc_window
        axis = window_axes(half_width, step)
        grids = {}
        for index, t_plot in enumerate(grid_plot):
            if t_plot in times:
                grids[t_plot] = q_function(trajectory.state(index), axis, axis, params.deformation)
        return grids

    # ------------------------------------------------------------------
    # 실행 (파일 출력)
    # ------------------------------------------------------------------
    @staticmethod
    def execute_run(config, out_dir):
        """run: 시계열·피크·Q 함수 파일과 run_meta.json 기록

        Returns:
            SimulationResult
        """
        os.makedirs(out_dir, exist_ok=True)
        result = SimulationService.simulate(config)
        series = result.series

        if 'timeseries' in config.outputs:
            write_timeseries_csv(series, os.path.join(out_dir, 'timeseries.csv'))
            envelope = analysis.inversion_envelope(series.t_plot, series.I, config.envelope_window)
            write_envelope_csv(series, result.cat, envelope, os.path.join(out_dir, 'envelope.csv'))

        report = analysis.peak_table(result.records)
        if 'peaks' in config.outputs:
            with open(os.path.join(out_dir, 'peaks.csv'), 'w', encoding='utf-8', newline='') as fp:
                fp.write(report.csv)

        lobes = {}
        if 'qfunc' in config.outputs and config.qfunc_times:
            grids = SimulationService.compute_qfunctions(config, result.generator)
            for t_plot, grid in grids.items():
                write_qfunc_csv(grid, os.path.join(out_dir, qfunc_filename(t_plot)))
                lobes[analysis.format_g6(t_plot)] = {
                    'grid_sum': grid.normalization(),
                    'lobes': [list(lobe) for lobe in find_lobes(grid)[:4]],
                }

        _write_json(
            os.path.join(out_dir, 'run_meta.json'),
            SimulationService.run_meta(result, report, lobes),
        )
        return result

    @staticmethod
    def run_meta(result, report, lobes=None):
        """run_meta.json 내용: config 만으로 재실행 가능"""
        config = result.config
        params = config.params
        summary = result.summary()
        comparison = analysis.compare_with_reference(
            result.records, abs(params.beta), params.tau,
        )
        alpha = abs(params.beta)
        return {
            'format_version': META_FORMAT_VERSION,
            'config': config.to_dict(),
            'diagnostics': {
                'hermiticity_residual': result.generator.hermiticity_residual(),
                'coupling_symmetry_residual': result.coupling.symmetry_residual(),
                'integrator_steps': result.cat.steps,
                'max_norm_drift': summary['max_norm_drift'],
                'max_energy_drift': summary['max_energy_drift'],
                'max_tail_occupancy': summary['max_tail_occupancy'],
                'mean_f_of_n': mean_f_of_n(alpha, params.deformation, params.n_max, power=1),
                'mean_f_squared_of_n': mean_f_of_n(alpha, params.deformation, params.n_max, power=2),
            },
            'analysis': {
                'peak_count': len(result.records),
                'revival_count': summary['revival_count'],
                'collapse_count': summary['collapse_count'],
                'revival_contrast': summary['revival_contrast'],
                'revival_verdict': report.verdict,
                'reference_comparison': comparison,
                'reference_offsets': _reference_offsets(comparison),
            },
            'qfunc': lobes or {},
        }

    @staticmethod
    def execute_qfunc(config, out_dir):
        """qfunc: Q 함수 격자만 계산해 기록. 반환값 {t_plot: 파일 경로}"""
        if not config.qfunc_times:
            raise ConfigurationError('qfunc_times 가 비어 있습니다 (--times 로 지정).')
        os.makedirs(out_dir, exist_ok=True)
        grids = SimulationService.compute_qfunctions(config)
        written = {}
        for t_plot, grid in grids.items():
            path = os.path.join(out_dir, qfunc_filename(t_plot))
            write_qfunc_csv(grid, path)
            written[t_plot] = path
        _write_json(os.path.join(out_dir, 'qfunc_meta.json'), {
            'format_version': META_FORMAT_VERSION,
            'config': config.to_dict(),
            'grid_sums': {
                analysis.format_g6(t): grid.normalization() for t, grid in grids.items()
            },
        })
        return written

    @staticmethod
    def reanalyze_peaks(timeseries_path, out_dir, *, smooth_window=8.0, prominence=0.02,
                        window=10.0, threshold=0.05):
        """peaks: 기존 timeseries.csv 로 피크 분석만 다시 수행"""
        t, inversion, s_p = read_timeseries_csv(timeseries_path)
        records = SimulationService.analyze(
            t, inversion, s_p,
            smooth_window=smooth_window, prominence=prominence,
            window=window, threshold=threshold,
        )
        report = analysis.peak_table(records)
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, 'peaks.csv'), 'w', encoding='utf-8', newline='') as fp:
            fp.write(report.csv)
        return report

    # ------------------------------------------------------------------
    # 이력 기록
    # ------------------------------------------------------------------
    @staticmethod
    def _start_run(config, out_dir, kind):
        beta = config.params.beta
        run = SimulationRun.objects.create(
            kind=kind, params=config.to_dict(), tau=config.params.tau,
            beta_re=beta.real, beta_im=beta.imag, out_dir=str(out_dir),
        )
        run.mark_running()
        return run

    @staticmethod
    def _fail_run(run, error):
        """실행 예외를 FAILED 로 기록. SimulationError 가 아니면 UnexpectedError 로 감싸 반환"""
        if not isinstance(error, SimulationError):
            logger.exception('실행 예외: run=%s', run.pk)
            error = UnexpectedError(error)
        run.mark_failed(error.code, error.message)
        return error

    @staticmethod
    def run_and_record(config, out_dir, *, kind='RUN'):
        """execute_run + SimulationRun/PeakRecordEntry 기록

        어떤 예외든 run 을 FAILED 로 남긴 뒤 원래 예외를 다시 발생시킵니다.
        """
        run = SimulationService._start_run(config, out_dir, kind)
        try:
            result = SimulationService.execute_run(config, out_dir)
        except Exception as e:
            SimulationService._fail_run(run, e)
            raise
        summary = result.summary()
        SimulationService._record_completed(run, summary)
        return run, result

    @staticmethod
    def qfunc_and_record(config, out_dir):
        """execute_qfunc + SimulationRun(kind=QFUNC) 기록. 반환값 (run, {t_plot: 경로})"""
        run = SimulationService._start_run(config, out_dir, 'QFUNC')
        try:
            written = SimulationService.execute_qfunc(config, out_dir)
        except Exception as e:
            SimulationService._fail_run(run, e)
            raise
        run.mark_completed({})
        return run, written

    @staticmethod
    @transaction.atomic
    def _record_completed(run, summary):
        run.mark_completed(summary)
        PeakRecordEntry.objects.bulk_create([
            PeakRecordEntry(
                run=run,
                t_plot=peak['t_plot'],
                s_value=peak['s_p'],
                kind=peak['kind'],
                envelope_amplitude=peak['envelope_amplitude'],
            )
            for peak in summary['peaks']
        ])

    # ------------------------------------------------------------------
    # 스윕
    # ------------------------------------------------------------------
    @staticmethod
    def cell_dir_name(tau, beta):
        beta = complex(beta)
        label = f'{beta.real:g}' + (f'{beta.imag:+g}i' if beta.imag else '')
        return f'tau_{tau:g}_beta_{label}'

    @staticmethod
    def _cell_base(params, out_dir):
        return {
            'tau': params.tau,
            'beta_re': params.beta.real,
            'beta_im': params.beta.imag,
            'out_dir': str(out_dir),
        }

    @staticmethod
    def failed_cell(config_dict, out_dir, error):
        """셀 예외 → FAILED 결과 dict (워커에서 돌아온 예외 포함)"""
        if not isinstance(error, SimulationError):
            error = UnexpectedError(error)
        params = RunConfig.from_dict(config_dict).params
        return {
            **SimulationService._cell_base(params, out_dir),
            'status': 'FAILED', 'error': error.code, 'message': error.message,
        }

    @staticmethod
    def run_cell(config_dict, out_dir):
        """스윕 셀 하나 실행 (DB 접근 없음). 실패도 결과 dict 로 반환"""
        config = RunConfig.from_dict(config_dict)
        params = config.params
        try:
            result = SimulationService.execute_run(config, out_dir)
        except SimulationError as e:
            logger.warning('스윕 셀 실패: tau=%g beta=%s (%s)', params.tau, params.beta, e.message)
            return SimulationService.failed_cell(config_dict, out_dir, e)
        except Exception as e:
            logger.exception('스윕 셀 예외: tau=%g beta=%s', params.tau, params.beta)
            return SimulationService.failed_cell(config_dict, out_dir, e)
        return {
            **SimulationService._cell_base(params, out_dir),
            'status': 'COMPLETED', 'error': '', 'message': '', **result.summary(),
        }

    @staticmethod
    def _dispatch_cells(cells):
        """cells: [(config_dict, out_dir)] → 결과 dict 리스트 (입력 순서 유지)"""
        if getattr(settings, 'CELERY_TASK_ALWAYS_EAGER', True):
            workers = settings.SIMULATION['SWEEP_MAX_WORKERS']
            with ThreadPoolExecutor(max_workers=workers) as pool:
                return list(pool.map(lambda cell: SimulationService.run_cell(*cell), cells))

        from celery import group

        from .tasks import run_sweep_cell

        job = group(run_sweep_cell.s(config_dict, out_dir) for config_dict, out_dir in cells)
        # 워커 예외 (시간 초과 등) 는 결과 목록에 예외 객체로 남음
        outcomes = job.apply_async().get(propagate=False)
        return SimulationService.collect_cell_outcomes(cells, outcomes)

    @staticmethod
    def collect_cell_outcomes(cells, outcomes):
        """그룹 결과 → 셀 결과 dict 리스트. 예외 결과는 FAILED 셀로 변환"""
        return [
            outcome if isinstance(outcome, dict)
            else SimulationService.failed_cell(config_dict, out_dir, outcome)
            for (config_dict, out_dir), outcome in zip(cells, outcomes)
        ]

    @staticmethod
    def sweep(base, tau_list, beta_list, out_dir, *, xlsx=False, notify=True):
        """τ × β 교차 격자를 동시에 실행하고 summary.csv 를 기록

        셀 실패는 요약에 FAILED 로 남고 스윕 전체를 중단하지 않습니다.

        Returns:
            (SweepJob, list[dict])
        """
        tau_list = list(tau_list) or list(DEFAULT_SWEEP_TAUS)
        beta_list = [complex(b) for b in beta_list] or [complex(b) for b in DEFAULT_SWEEP_BETAS]
        os.makedirs(out_dir, exist_ok=True)

        job = SweepJob.objects.create(
            out_dir=str(out_dir),
            tau_list=tau_list,
            beta_list=[[b.real, b.imag] for b in beta_list],
            base_config=base.to_dict(),
            cell_count=len(tau_list) * len(beta_list),
        )
        cells = []
        for tau, beta in itertools.product(tau_list, beta_list):
            cell_config = base.with_cell(tau, beta)
            cell_dir = os.path.join(out_dir, SimulationService.cell_dir_name(tau, beta))
            cells.append((cell_config.to_dict(), cell_dir))

        logger.info('스윕 시작: %d셀 (tau %s × beta %s)', len(cells), tau_list, beta_list)
        results = SimulationService._dispatch_cells(cells)

        failed = 0
        for (config_dict, _cell_dir), cell in zip(cells, results):
            run = SimulationRun.objects.create(
                kind='SWEEP_CELL', sweep=job, params=config_dict,
                tau=cell['tau'], beta_re=cell['beta_re'], beta_im=cell['beta_im'],
                out_dir=cell['out_dir'],
            )
            if cell['status'] == 'COMPLETED':
                SimulationService._record_completed(run, cell)
            else:
                failed += 1
                run.mark_failed(cell['error'], cell['message'])
        job.finish(failed)

        rows = SimulationService.summary_rows(results)
        _write_csv(
            os.path.join(out_dir, 'summary.csv'),
            [column.key for column in SUMMARY_COLUMNS],
            ([row[column.key] for column in SUMMARY_COLUMNS] for row in rows),
        )
        if xlsx:
            wb = build_workbook(rows, SUMMARY_COLUMNS, sheet_title='Sweep')
            save_workbook(wb, os.path.join(out_dir, 'summary.xlsx'))

        logger.info('스윕 완료: %d셀 중 %d셀 실패', len(results), failed)
        if notify:
            from .slack import send_sweep_finished

            send_sweep_finished(job, rows)
        return job, results

    @staticmethod
    def summary_rows(results):
        """셀 결과 → summary.csv 행 (수치는 문자열로 고정)"""
        rows = []
        for cell in results:
            ok = cell['status'] == 'COMPLETED'
            contrast = cell.get('revival_contrast') if ok else None
            monotone = cell.get('revival_monotone') if ok else None
            rows.append({
                'tau': _num(cell['tau']),
                'beta_re': _num(cell['beta_re']),
                'beta_im': _num(cell['beta_im']),
                'status': cell['status'],
                'revival_count': cell.get('revival_count', '') if ok else '',
                'collapse_count': cell.get('collapse_count', '') if ok else '',
                'revival_contrast': '' if contrast is None else _num(contrast),
                'revival_monotone': _optional(monotone),
                'max_envelope': _num(cell['max_envelope']) if ok else '',
                'max_norm_drift': _num(cell['max_norm_drift']) if ok else '',
                'out_dir': cell['out_dir'],
                'error': cell.get('error', ''),
            })
        return rows


def best_contrast_cells(rows):
    """β 별로 revival 대비가 가장 큰 τ {beta_re: tau}"""
    best = {}
    for row in rows:
        if not row['revival_contrast']:
            continue
        contrast = float(row['revival_contrast'])
        key = row['beta_re']
        if key not in best or contrast > best[key][1]:
            best[key] = (row['tau'], contrast)
    return {beta: float(tau) for beta, (tau, _contrast) in best.items()}
