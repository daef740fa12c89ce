"""
레이저-이온 결합 연산자 F_q 의 행렬 요소

잘린 Fock 기저에서 <m|F_q|n> 을 계산합니다. 검증용으로 두 개의 독립 오라클
(사다리 연산자 급수, τ = 0 Laguerre 닫힌 형태)을 함께 제공합니다.
"""
import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .exceptions import ConfigurationError, SeriesConvergenceError
from .qalgebra import HARMONIC, q_log_factorials, q_number

SERIES_TOLERANCE = 1e-14

# (iε)^d 의 위상 i^d
_I_POWERS = (1.0 + 0j, 1j, -1.0 + 0j, -1j)


@dataclass(frozen=True)
class CouplingMatrix:
    """<m|F_q|n> 행렬 (전치 대칭, 켤레 없음)"""

    n_max: int
    epsilon: float
    deformation: object
    elements: np.ndarray

    @property
    def dim(self):
        return self.n_max + 1

    @property
    def dagger(self):
        """잘린 행렬의 켤레 전치: 해밀토니안을 정확히 에르미트로 만듭니다."""
        return self.elements.conj().T

    def symmetry_residual(self):
        return float(np.max(np.abs(self.elements - self.elements.T)))


# ------------------------------------------------------------------
# 로그 영역 닫힌 형태
# ------------------------------------------------------------------

def _element_from_tables(m, n, epsilon, lf):
    """m <= n 전제. lf = ln([k]_q!) 테이블 (길이 > n)"""
    if epsilon == 0:
        return 1.0 + 0j if m == n else 0j

    diff = n - m
    log_eps = math.log(abs(epsilon))
    sign = math.copysign(1.0, epsilon) ** diff
    k = np.arange(m + 1)
    log_terms = (
        (diff + 2 * k) * log_eps
        + 0.5 * (lf[m] + lf[n])
        - gammaln(k + 1)
        - gammaln(diff + k + 1)
        - lf[m - k]
    )
    alternating = np.where(k % 2 == 0, 1.0, -1.0)
    total = float(np.sum(alternating * np.exp(log_terms)))
    return math.exp(-0.5 * epsilon ** 2) * sign * _I_POWERS[diff % 4] * total


def fq_element(m, n, epsilon, d):
    """<m|F_q|n>

    m <= n 에 대해 e^{-ε²/2}(iε)^{n-m} sqrt([m]_q!/[n]_q!) Σ_k ... 를
    로그 영역에서 계산하고, m > n 은 전치 대칭으로 처리합니다.
    """
    if m < 0 or n < 0:
        raise ConfigurationError(f'Fock 준위는 0 이상이어야 합니다: ({m}, {n})')
    if m > n:
        m, n = n, m
    return _element_from_tables(m, n, epsilon, q_log_factorials(n, d))


def fq_matrix(n_max, epsilon, d):
    """잘린 기저 전체의 CouplingMatrix"""
    if n_max < 1:
        raise ConfigurationError(f'n_max는 1 이상이어야 합니다: {n_max}')
    lf = q_log_factorials(n_max, d)
    elements = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    for n in range(n_max + 1):
        for m in range(n + 1):
            value = _element_from_tables(m, n, epsilon, lf)
            elements[m, n] = value
            elements[n, m] = value
    elements.flags.writeable = False
    return CouplingMatrix(n_max=n_max, epsilon=float(epsilon), deformation=d, elements=elements)


def write_coupling_csv(matrix, path):
    """디버그용 덤프: row,col,re,im"""
    with open(path, 'w', newline='') as fp:
        writer = csv.writer(fp, lineterminator='\n')
        writer.writerow(['row', 'col', 're', 'im'])
        for (row, col), value in np.ndenumerate(matrix.elements):
            writer.writerow([row, col, repr(float(value.real)), repr(float(value.imag))])


# ------------------------------------------------------------------
# 오라클 1: 사다리 연산자 급수
# ------------------------------------------------------------------

def lowering_matrix(size, d):
    """A|n> = sqrt([n]_q)|n-1> 의 size x size 행렬"""
    a = np.zeros((size, size))
    n = np.arange(1, size)
    a[n - 1, n] = np.sqrt(q_number(n, d))
    return a


def fq_series_oracle(m, n, epsilon, d, K=40):
    """<m| e^{-ε²/2} Σ_a (iε)^a A†^a/a! Σ_b (iε)^b A^b/b! |n>

    닫힌 형태를 쓰지 않고 사다리 작용을 직접 적용합니다. 테스트 전용입니다.
    """
    size = max(m, n) + K + 2
    lower = lowering_matrix(size, d)
    raise_ = lower.T
    ie = 1j * epsilon

    vec = np.zeros(size, dtype=complex)
    vec[n] = 1.0

    term = vec
    acc = vec.copy()
    for b in range(1, K + 1):
        term = (ie / b) * (lower @ term)
        acc = acc + term
    last_b = float(np.max(np.abs(term)))

    term = acc
    out = acc.copy()
    for a in range(1, K + 1):
        term = (ie / a) * (raise_ @ term)
        out = out + term
    last_a = float(np.max(np.abs(term)))

    last = max(last_a, last_b)
    if last > SERIES_TOLERANCE:
        raise SeriesConvergenceError(last, K)
    return complex(math.exp(-0.5 * epsilon ** 2) * out[m])


# ------------------------------------------------------------------
# 오라클 2: 조화 트랩 Laguerre 닫힌 형태
# ------------------------------------------------------------------

def genlaguerre(m, alpha, x):
    """연관 Laguerre 다항식 L_m^(alpha)(x): 3항 점화식"""
    if m == 0:
        return 1.0
    prev, cur = 1.0, 1.0 + alpha - x
    for k in range(1, m):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def f_harmonic_closed_form(m, n, epsilon):
    """<m|e^{iε(a†+a)}|n> = e^{-ε²/2}(iε)^{n-m} sqrt(m!/n!) L_m^{(n-m)}(ε²)"""
    if m > n:
        m, n = n, m
    diff = n - m
    if epsilon == 0:
        return 1.0 + 0j if diff == 0 else 0j
    log_mag = diff * math.log(abs(epsilon)) + 0.5 * (gammaln(m + 1) - gammaln(n + 1))
    sign = math.copysign(1.0, epsilon) ** diff
    value = math.exp(-0.5 * epsilon ** 2 + log_mag) * genlaguerre(m, diff, epsilon ** 2)
    return sign * _I_POWERS[diff % 4] * value


def harmonic_coupling_matrix(n_max, epsilon):
    """τ = 0 CouplingMatrix 를 Laguerre 닫힌 형태로 구성 (오라클 파이프라인용)"""
    elements = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    for n in range(n_max + 1):
        for m in range(n + 1):
            value = f_harmonic_closed_form(m, n, epsilon)
            elements[m, n] = value
            elements[n, m] = value
    elements.flags.writeable = False
    return CouplingMatrix(
        n_max=n_max, epsilon=float(epsilon), deformation=HARMONIC, elements=elements,
    )
