"""
관측량 계산

점유확률, 코히런스, 반전, 부분 상호 엔트로피 S(P), 코히런스 엔트로피 항 S(C),
Husimi Q 함수를 계산합니다.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import maximum_filter
from scipy.special import logsumexp, rel_entr, xlogy

from .qalgebra import converged_terms, q_log_factorials

# 전체 상태 확률 하한 (0으로 나누기 방지)
PROBABILITY_FLOOR = 1e-300
COHERENCE_FLOOR = 1e-30
BRANCH_WEIGHTS = (0.5, 0.5)


@dataclass(frozen=True)
class ObservableSample:
    """한 시각의 관측량"""

    t_plot: float
    P_g: float
    P_e: float
    C_ge: complex
    I: float
    P_g1: float
    P_e1: float
    C_ge1: complex
    P_g2: float
    P_e2: float
    C_ge2: complex
    S_P: float
    S_C: float = None


@dataclass(frozen=True)
class ObservableSeries:
    """세 궤적(캣, 분기 1, 분기 2)에서 얻은 시계열 열(column) 묶음"""

    t_plot: np.ndarray
    P_g: np.ndarray
    P_e: np.ndarray
    C_ge: np.ndarray
    I: np.ndarray
    P_g1: np.ndarray
    P_e1: np.ndarray
    C_ge1: np.ndarray
    P_g2: np.ndarray
    P_e2: np.ndarray
    C_ge2: np.ndarray
    S_P: np.ndarray
    S_C: np.ndarray

    def __len__(self):
        return len(self.t_plot)

    def sample(self, index):
        s_c = self.S_C[index]
        return ObservableSample(
            t_plot=float(self.t_plot[index]),
            P_g=float(self.P_g[index]), P_e=float(self.P_e[index]),
            C_ge=complex(self.C_ge[index]), I=float(self.I[index]),
            P_g1=float(self.P_g1[index]), P_e1=float(self.P_e1[index]),
            C_ge1=complex(self.C_ge1[index]),
            P_g2=float(self.P_g2[index]), P_e2=float(self.P_e2[index]),
            C_ge2=complex(self.C_ge2[index]),
            S_P=float(self.S_P[index]),
            S_C=None if np.isnan(s_c) else float(s_c),
        )


@dataclass(frozen=True)
class QGrid:
    """Q(α) 격자. values[i, j] = Q(alpha_re_axis[i] + i·alpha_im_axis[j])"""

    alpha_re_axis: np.ndarray
    alpha_im_axis: np.ndarray
    values: np.ndarray

    @property
    def cell_area(self):
        return _step(self.alpha_re_axis) * _step(self.alpha_im_axis)

    def normalization(self):
        """격자 리만 합 Σ Q dα_r dα_i"""
        return float(np.sum(self.values) * self.cell_area)


def _step(axis):
    return float(axis[1] - axis[0]) if len(axis) > 1 else 1.0


# ------------------------------------------------------------------
# 점유확률 / 반전 / 코히런스
# ------------------------------------------------------------------

def populations(s):
    """(P_g, P_e) = (Σ|g_n|², Σ|e_n|²)"""
    return float(np.sum(np.abs(s.g) ** 2)), float(np.sum(np.abs(s.e) ** 2))


def inversion(s):
    p_g, p_e = populations(s)
    return p_g - p_e


def coherence(s):
    """C_ge = Σ g_n* e_n"""
    return complex(np.vdot(s.g, s.e))


# ------------------------------------------------------------------
# 엔트로피
# ------------------------------------------------------------------

def partial_mutual_entropy(full, b1, b2, weights=BRANCH_WEIGHTS):
    """S(P) = Σ_i λ_i [P_g^(i) ln(P_g^(i)/P_g) + P_e^(i) ln(P_e^(i)/P_e)]

    full, b1, b2 는 (P_g, P_e) 쌍이며 스칼라 또는 배열을 받습니다.
    0·log 0 = 0, 전체 상태 확률은 PROBABILITY_FLOOR 로 하한 처리합니다.
    """
    p_g = np.maximum(full[0], PROBABILITY_FLOOR)
    p_e = np.maximum(full[1], PROBABILITY_FLOOR)
    total = 0.0
    for weight, branch in zip(weights, (b1, b2)):
        total = total + weight * (rel_entr(branch[0], p_g) + rel_entr(branch[1], p_e))
    if np.ndim(total) == 0:
        return float(total)
    return total


def _coherence_term(branch_c, full_c):
    """2·Re[C^(i) · (log(C^(i)/C))*]: 주 분기 복소 로그"""
    return 2.0 * np.real(branch_c * np.conj(np.log(branch_c / full_c)))


def coherence_entropy_term(full, b1, b2, weights=BRANCH_WEIGHTS):
    """S(C): 상호 엔트로피 중 코히런스 의존 부분

    full, b1, b2 는 (P_g, P_e, C_ge) 튜플입니다. 분기 코히런스가 0 이면 0 이고,
    |C| < COHERENCE_FLOOR 인데 분기 코히런스가 0 이 아니면 None 을 반환합니다.
    """
    full_c = complex(full[2])
    total = 0.0
    for weight, branch in zip(weights, (b1, b2)):
        branch_c = complex(branch[2])
        if branch_c == 0:
            continue
        if abs(full_c) < COHERENCE_FLOOR:
            return None
        total += weight * float(_coherence_term(branch_c, full_c))
    return total


def branch_relative_entropy(full, branch):
    """한 분기의 상대 엔트로피 (점유확률 항 + 코히런스 항)"""
    p_g = max(full[0], PROBABILITY_FLOOR)
    p_e = max(full[1], PROBABILITY_FLOOR)
    value = float(rel_entr(branch[0], p_g) + rel_entr(branch[1], p_e))
    branch_c = complex(branch[2])
    if branch_c != 0:
        if abs(complex(full[2])) < COHERENCE_FLOOR:
            return None
        value += float(_coherence_term(branch_c, complex(full[2])))
    return value


def mutual_entropy(full, b1, b2, weights=BRANCH_WEIGHTS):
    """S_m = Σ_i λ_i · branch_relative_entropy: S(P) + S(C) 직접 계산"""
    total = 0.0
    for weight, branch in zip(weights, (b1, b2)):
        value = branch_relative_entropy(full, branch)
        if value is None:
            return None
        total += weight * value
    return total


def coherence_entropy_series(c_full, c_b1, c_b2, weights=BRANCH_WEIGHTS):
    """S(C) 배열 버전. 판정 불가 시각은 NaN"""
    out = np.zeros(len(c_full))
    for index in range(len(c_full)):
        value = coherence_entropy_term(
            (0.0, 0.0, c_full[index]), (0.0, 0.0, c_b1[index]), (0.0, 0.0, c_b2[index]),
            weights=weights,
        )
        out[index] = np.nan if value is None else value
    return out


def sample_observables(full_state, b1_state, b2_state, t_plot):
    """세 상태로부터 한 시각의 ObservableSample 구성"""
    full = populations(full_state) + (coherence(full_state),)
    b1 = populations(b1_state) + (coherence(b1_state),)
    b2 = populations(b2_state) + (coherence(b2_state),)
    return ObservableSample(
        t_plot=float(t_plot),
        P_g=full[0], P_e=full[1], C_ge=full[2], I=full[0] - full[1],
        P_g1=b1[0], P_e1=b1[1], C_ge1=b1[2],
        P_g2=b2[0], P_e2=b2[1], C_ge2=b2[2],
        S_P=partial_mutual_entropy(full[:2], b1[:2], b2[:2]),
        S_C=coherence_entropy_term(full, b1, b2),
    )


def _trajectory_columns(traj):
    p_g = np.sum(np.abs(traj.g) ** 2, axis=1)
    p_e = np.sum(np.abs(traj.e) ** 2, axis=1)
    c_ge = np.sum(np.conj(traj.g) * traj.e, axis=1)
    return p_g, p_e, c_ge


def observable_series(cat, branch1, branch2):
    """같은 시간 격자의 세 Trajectory 로부터 ObservableSeries 계산"""
    p_g, p_e, c_ge = _trajectory_columns(cat)
    p_g1, p_e1, c_ge1 = _trajectory_columns(branch1)
    p_g2, p_e2, c_ge2 = _trajectory_columns(branch2)
    return ObservableSeries(
        t_plot=cat.times_plot,
        P_g=p_g, P_e=p_e, C_ge=c_ge, I=p_g - p_e,
        P_g1=p_g1, P_e1=p_e1, C_ge1=c_ge1,
        P_g2=p_g2, P_e2=p_e2, C_ge2=c_ge2,
        S_P=partial_mutual_entropy((p_g, p_e), (p_g1, p_e1), (p_g2, p_e2)),
        S_C=coherence_entropy_series(c_ge, c_ge1, c_ge2),
    )


# ------------------------------------------------------------------
# Husimi Q 함수
# ------------------------------------------------------------------

def window_axes(half_width=6.0, step=0.1):
    """[-half_width, half_width] 균일 축"""
    count = int(round(2 * half_width / step))
    return np.round(-half_width + step * np.arange(count + 1), 10)


def q_function(s, alpha_re_axis, alpha_im_axis, d):
    """Q(α) = (1/π)(|<α|g>|² + |<α|e>|²), <α| 는 q-코히런트 상태

    이온 자유도에 대해 trace 를 취한 질량중심 축약 밀도행렬의 기대값입니다.
    투영 코히런트 상태는 수렴한 q-지수로 정규화합니다 (n_max 위 성분은
    시뮬레이션 공간과 직교하므로 정확한 <α|ρ|α>_q 입니다).
    """
    re_axis = np.asarray(alpha_re_axis, dtype=float)
    im_axis = np.asarray(alpha_im_axis, dtype=float)
    alpha = (re_axis[:, None] + 1j * im_axis[None, :]).ravel()
    dim = len(s.g)
    n = np.arange(dim)

    x = np.abs(alpha) ** 2
    n_terms = max(dim, converged_terms(float(np.max(x)), d))
    lf_norm = q_log_factorials(n_terms - 1, d)
    series = np.arange(n_terms)
    log_norm = logsumexp(xlogy(series[None, :], x[:, None]) - lf_norm[None, :], axis=1)

    # conj(c_n(α)) 의 정규화 전 부분
    projector = np.power(np.conj(alpha)[:, None], n[None, :]) * np.exp(-0.5 * lf_norm[:dim])[None, :]
    scale = np.exp(-0.5 * log_norm)
    overlap_g = (projector @ s.g) * scale
    overlap_e = (projector @ s.e) * scale
    values = (np.abs(overlap_g) ** 2 + np.abs(overlap_e) ** 2) / math.pi
    return QGrid(
        alpha_re_axis=re_axis,
        alpha_im_axis=im_axis,
        values=values.reshape(len(re_axis), len(im_axis)),
    )


def find_lobes(grid, rel_threshold=0.05):
    """Q 격자의 국소 최대점 [(α_r, α_i, Q), ...] (최대값 대비 rel_threshold 이상)"""
    values = grid.values
    peak_mask = (maximum_filter(values, size=3, mode='nearest') == values)
    peak_mask &= values >= rel_threshold * float(np.max(values))
    lobes = [
        (float(grid.alpha_re_axis[i]), float(grid.alpha_im_axis[j]), float(values[i, j]))
        for i, j in zip(*np.nonzero(peak_mask))
    ]
    lobes.sort(key=lambda lobe: -lobe[2])
    return lobes
