"""
q-변형 진동자 대수

q-수, q-팩토리얼, q-지수함수, q-코히런트 상태 진폭, 트랩 에너지 준위,
비선형 사상 f(N)을 계산합니다.

모든 함수는 입력만으로 결정되는 순수 함수입니다 (ħ = 1, Ω = 1 단위).
팩토리얼 비율은 반드시 q_log_factorials() 차이로 계산합니다.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp, xlogy

from .exceptions import ConfigurationError

# q-지수 급수 수렴 판정 (e^-40 ≈ 4e-18)
SERIES_LOG_CUTOFF = 40.0
MAX_SERIES_TERMS = 20000


@dataclass(frozen=True)
class DeformationParam:
    """트랩 비조화성 파라미터

    tau = 0 이면 조화 진동자 트랩입니다. q = e^tau 는 생성 시 캐시됩니다.
    """

    tau: float = 0.0
    q: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not math.isfinite(self.tau):
            raise ConfigurationError(
                f'tau는 유한한 실수여야 합니다: {self.tau}', detail={'tau': self.tau},
            )
        object.__setattr__(self, 'tau', float(self.tau))
        object.__setattr__(self, 'q', math.exp(self.tau))

    @property
    def is_harmonic(self):
        return self.tau == 0.0


HARMONIC = DeformationParam(0.0)


# ------------------------------------------------------------------
# q-수 / q-팩토리얼
# ------------------------------------------------------------------

def q_number(x, d):
    """[x]_q = (q^x - q^-x) / (q - q^-1)

    sinh(x·tau)/sinh(tau) 형태로 계산합니다. tau = 0 이면 x를 그대로 반환합니다.
    x는 스칼라 또는 numpy 배열을 받습니다.
    """
    if d.is_harmonic:
        if np.isscalar(x):
            return float(x)
        return np.asarray(x, dtype=float).copy()
    value = np.sinh(np.multiply(x, d.tau)) / math.sinh(d.tau)
    if np.isscalar(x):
        return float(value)
    return value


def log_q_number(x, d):
    """ln([x]_q), x > 0

    ln[x]_q = (x-1)|tau| + ln(1 - e^(-2x|tau|)) - ln(1 - e^(-2|tau|)) 로 계산하므로
    sinh 가 넘치는 큰 x·tau 에서도 유한합니다. tau = 0 이면 ln x.
    """
    x = np.asarray(x, dtype=float)
    if d.is_harmonic:
        value = np.log(x)
    else:
        tau = abs(d.tau)
        value = (x - 1.0) * tau + np.log(-np.expm1(-2.0 * x * tau)) - math.log(-math.expm1(-2.0 * tau))
    if value.ndim == 0:
        return float(value)
    return value


def q_log_factorials(n, d):
    """ln([k]_q!) for k = 0..n 배열"""
    if n < 0:
        raise ConfigurationError(f'n은 0 이상이어야 합니다: {n}')
    out = np.zeros(n + 1)
    if n > 0:
        out[1:] = np.cumsum(log_q_number(np.arange(1, n + 1), d))
    return out


def q_log_factorial(n, d):
    """ln([n]_q!): ln([k]_q) 합으로 계산"""
    return float(q_log_factorials(n, d)[n])


def q_factorial(n, d):
    return math.exp(q_log_factorial(n, d))


# ------------------------------------------------------------------
# q-지수함수
# ------------------------------------------------------------------

def _log_series_terms(x, lf):
    n = np.arange(len(lf))
    return xlogy(n, x) - lf


def q_log_exp(x, d, n_terms):
    """ln(Σ_{n<n_terms} x^n / [n]_q!): 로그 영역 합 (logsumexp)"""
    if x < 0:
        raise ConfigurationError(f'q_exp 인자는 0 이상이어야 합니다: {x}')
    if n_terms < 1:
        raise ConfigurationError(f'n_terms는 1 이상이어야 합니다: {n_terms}')
    if x == 0:
        return 0.0
    lf = q_log_factorials(n_terms - 1, d)
    return float(logsumexp(_log_series_terms(x, lf)))


def q_exp(x, d, n_terms):
    """exp_q^x 를 n_terms 항에서 자른 값

    시뮬레이션에서는 n_terms = n_max + 1 을 넘겨 잘린 기저와 정규화를 맞춥니다.
    """
    return math.exp(q_log_exp(x, d, n_terms))


def converged_terms(x, d):
    """q-지수 급수가 배정밀도로 수렴하는 최소 항 수"""
    if x <= 0:
        return 1
    log_x = math.log(x)
    log_term = 0.0
    log_peak = 0.0
    n = 0
    while n < MAX_SERIES_TERMS:
        n += 1
        log_term += log_x - log_q_number(n, d)
        log_peak = max(log_peak, log_term)
        if n > x and log_term < log_peak - SERIES_LOG_CUTOFF:
            return n + 1
    return MAX_SERIES_TERMS


# ------------------------------------------------------------------
# f(N), 코히런트 상태
# ------------------------------------------------------------------

def f_of_n(n, d):
    """f(n) = sqrt([n]_q / n), f(0) = 1 (A|0> = 0 이므로 물리량에 무관)"""
    if n == 0:
        return 1.0
    return math.sqrt(q_number(n, d) / n)


def f_of_n_array(n_max, d):
    n = np.arange(n_max + 1, dtype=float)
    out = np.ones(n_max + 1)
    out[1:] = np.sqrt(q_number(n[1:], d) / n[1:])
    return out


def coherent_amplitudes(beta, d, n_max, norm_terms=None):
    """q-코히런트 상태 |beta>_q 의 Fock 진폭 c_n, n = 0..n_max

    Args:
        beta: 복소 진폭
        d: DeformationParam
        n_max: 기저 최대 준위
        norm_terms: 정규화 급수 항 수. 기본값 n_max + 1 (잘린 기저에서 단위 노름)

    Returns:
        np.ndarray (complex, 길이 n_max + 1)
    """
    if n_max < 1:
        raise ConfigurationError(f'n_max는 1 이상이어야 합니다: {n_max}')
    beta = complex(beta)
    n = np.arange(n_max + 1)
    if beta == 0:
        out = np.zeros(n_max + 1, dtype=complex)
        out[0] = 1.0
        return out

    norm_terms = norm_terms or (n_max + 1)
    x = abs(beta) ** 2
    lf = q_log_factorials(n_max, d)
    log_norm = q_log_exp(x, d, norm_terms)
    log_mag = n * math.log(abs(beta)) - 0.5 * lf - 0.5 * log_norm
    phase = np.exp(1j * n * np.angle(beta))
    return np.exp(log_mag) * phase


def mean_f_of_n(alpha, d, n_max, power=1):
    """<alpha|f(N)^power|alpha>_q: 변형 트랩의 유효 Lamb-Dicke 보정

    power=2 는 <[N]_q / N> 과 같습니다.
    """
    weights = np.abs(coherent_amplitudes(alpha, d, n_max)) ** 2
    return float(np.sum(weights * f_of_n_array(n_max, d) ** power))


# ------------------------------------------------------------------
# 에너지 스펙트럼
# ------------------------------------------------------------------

def trap_level_energy(n, omega, d):
    """E_n = (omega/2)([n+1]_q + [n]_q)"""
    return 0.5 * omega * (q_number(n + 1, d) + q_number(n, d))


def trap_level_energies(n_max, omega, d):
    n = np.arange(n_max + 1)
    return 0.5 * omega * (q_number(n + 1, d) + q_number(n, d))


def trap_level_energy_taylor(n, omega, d):
    """tau^2 차수까지의 테일러 전개 (작은 tau 검증용)"""
    s = n + 0.5
    tau2 = d.tau ** 2
    return omega * (s * (1.0 - tau2 / 24.0) + s ** 3 * tau2 / 6.0)


def rabi_frequency_estimate(n, omega, Omega, epsilon, d):
    """mu(n) = sqrt((omega/2 (cosh(2(n+1)tau) - 1))^2 + Omega^2 epsilon^2 [n+1]_q)

    omega >> Omega, Delta = -omega 조건의 최저차 근사입니다.
    """
    anharmonic = 0.5 * omega * (math.cosh(2.0 * (n + 1) * d.tau) - 1.0)
    return math.sqrt(anharmonic ** 2 + (Omega * epsilon) ** 2 * q_number(n + 1, d))


def anharmonic_slope(omega, d, n_min=5, n_max=30):
    """비조화 항 제곱의 log-log 기울기 (작은 tau에서 약 4)"""
    if d.is_harmonic:
        raise ConfigurationError('tau = 0 이면 비조화 항이 0입니다.')
    n = np.arange(n_min, n_max + 1)
    anharmonic = 0.5 * omega * (np.cosh(2.0 * (n + 1) * d.tau) - 1.0)
    slope, _intercept = np.polyfit(np.log(n + 1), np.log(anharmonic ** 2), 1)
    return float(slope)
