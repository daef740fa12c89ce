"""
시뮬레이션 관련 예외

모든 예외는 SimulationError를 상속하며, 관리 명령어는 to_dict() 결과를
stderr에 JSON으로 출력합니다.
"""


class SimulationError(Exception):
    """시뮬레이션 기본 예외"""

    code = 'simulation_error'
    exit_code = 1

    def __init__(self, message, detail=None):
        self.message = message
        self.detail = detail or {}
        super().__init__(message)

    def to_dict(self):
        return {
            'error': self.code,
            'message': self.message,
            'detail': self.detail,
        }


class ConfigurationError(SimulationError):
    """설정값 오류 (RunConfig 검증 실패, 스텝 가드 위반 등)"""

    code = 'configuration_error'
    exit_code = 2


class DimensionMismatchError(SimulationError):
    """SystemParams와 CouplingMatrix의 기저 크기 불일치"""

    code = 'dimension_mismatch'

    def __init__(self, expected, actual):
        super().__init__(
            f'기저 크기 불일치: params n_max={expected}, coupling n_max={actual}',
            detail={'expected': expected, 'actual': actual},
        )


class IntegratorDriftError(SimulationError):
    """노름 드리프트 허용치 초과 (dt 과대)"""

    code = 'integrator_drift'

    def __init__(self, drift, limit, t):
        super().__init__(
            f'노름 드리프트 {drift:.3e} > {limit:.1e} (t={t:.6g}), dt를 줄이세요',
            detail={'drift': drift, 'limit': limit, 't': t},
        )


class TruncationLeakError(SimulationError):
    """기저 상단 점유율이 오류 임계값 초과"""

    code = 'truncation_leak'

    def __init__(self, occupancy, limit):
        super().__init__(
            f'기저 상단 점유율 {occupancy:.3e} > {limit:.1e}, n_max를 늘리세요',
            detail={'occupancy': occupancy, 'limit': limit},
        )


class SeriesConvergenceError(SimulationError):
    """급수 오라클 미수렴"""

    code = 'series_not_converged'

    def __init__(self, last_term, terms):
        super().__init__(
            f'급수 미수렴: 마지막 항 {last_term:.3e} (K={terms})',
            detail={'last_term': last_term, 'terms': terms},
        )


class EmptySeriesError(SimulationError):
    """빈 시계열로 피크 검출 시도"""

    code = 'empty_series'

    def __init__(self):
        super().__init__('빈 시계열에서는 피크를 검출할 수 없습니다.')


class UnexpectedError(SimulationError):
    """SimulationError 가 아닌 예외 (파일 I/O, 워커 시간 초과 등) 를 감싼 오류"""

    code = 'unexpected'

    def __init__(self, original):
        super().__init__(
            str(original) or type(original).__name__,
            detail={'type': type(original).__name__},
        )
