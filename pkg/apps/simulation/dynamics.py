"""
결합 진폭 방정식과 시간 전개

    i d/dt (g; e) = H (g; e)

H 는 시간에 무관한 에르미트 행렬이므로, 고정 스텝 고전 RK4 의 한 스텝은
행렬 다항식 R(-iHh) = Σ_{j<=4} (-iHh)^j / j! 입니다. evolve() 는 H 를 한 번
대각화한 뒤 고유값별로 R(-iλh)^n 을 로그 형태로 적용하므로, n 번의 명시적
RK4 스텝과 같은 결과를 반올림 오차 누적 없이 얻습니다.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import log1p

from .exceptions import (
    ConfigurationError,
    DimensionMismatchError,
    IntegratorDriftError,
)
from .qalgebra import DeformationParam, coherent_amplitudes, trap_level_energies

logger = logging.getLogger(__name__)

# ω̄·dt 상한 (가장 빠른 위상 해상)
STEP_GUARD = 0.05
DEFAULT_DT = 5e-7
NORM_DRIFT_ABORT = 1e-6
TAIL_WIDTH = 3
TAIL_WARN = 1e-6


def plot_to_physical(t_plot):
    """그래프 시간 (Ωt/2π) → 물리 시간"""
    return 2.0 * math.pi * np.asarray(t_plot, dtype=float)


def physical_to_plot(t_phys):
    return np.asarray(t_phys, dtype=float) / (2.0 * math.pi)


def sample_grid(t_end_plot, spacing):
    """0 부터 t_end_plot 까지 균일 샘플 격자 (그래프 시간)"""
    if t_end_plot <= 0 or spacing <= 0:
        raise ConfigurationError(
            't_end_plot, sample_spacing_plot 은 양수여야 합니다.',
            detail={'t_end_plot': t_end_plot, 'sample_spacing_plot': spacing},
        )
    count = int(math.floor(t_end_plot / spacing + 1e-9))
    return np.round(np.arange(count + 1) * spacing, 9)


# ------------------------------------------------------------------
# 도메인 타입
# ------------------------------------------------------------------

@dataclass(frozen=True)
class SystemParams:
    """한 번의 시뮬레이션을 결정하는 무차원 파라미터 (기본값: 기준 수치 계산 세트)"""

    omega_bar: float = 50.0
    delta_bar: float = -50.0
    epsilon: float = 0.05
    beta: complex = 4.0
    phi: float = 0.0
    deformation: DeformationParam = DeformationParam(0.0)
    n_max: int = 32

    def __post_init__(self):
        if self.n_max < 1:
            raise ConfigurationError(f'n_max는 1 이상이어야 합니다: {self.n_max}')
        if not self.omega_bar > 0:
            raise ConfigurationError(f'omega_bar는 양수여야 합니다: {self.omega_bar}')
        object.__setattr__(self, 'beta', complex(self.beta))

    @property
    def dim(self):
        return self.n_max + 1

    @property
    def tau(self):
        return self.deformation.tau

    def to_dict(self):
        return {
            'omega_bar': self.omega_bar,
            'delta_bar': self.delta_bar,
            'epsilon': self.epsilon,
            'beta': [self.beta.real, self.beta.imag],
            'phi': self.phi,
            'tau': self.tau,
            'n_max': self.n_max,
        }


@dataclass(frozen=True)
class AmplitudeState:
    """Ψ(t) = Σ g_m|g,m> + Σ e_m|e,m>"""

    g: np.ndarray
    e: np.ndarray
    t: float = 0.0

    @classmethod
    def from_vector(cls, vector, t, dim):
        return cls(g=vector[:dim].copy(), e=vector[dim:].copy(), t=float(t))

    @property
    def vector(self):
        return np.concatenate([self.g, self.e])

    def norm_squared(self):
        return float(np.sum(np.abs(self.g) ** 2) + np.sum(np.abs(self.e) ** 2))

    def combine(self, other, a, b):
        """a·self + b·other (선형성 검증용)"""
        return AmplitudeState(g=a * self.g + b * other.g, e=a * self.e + b * other.e, t=self.t)


@dataclass(frozen=True)
class Generator:
    """이온 내부 상태 × 질량중심 Fock 기저의 2(n_max+1) 차원 해밀토니안"""

    hamiltonian: np.ndarray
    params: SystemParams

    @property
    def dim(self):
        return self.params.dim

    def hermiticity_residual(self):
        h = self.hamiltonian
        return float(np.max(np.abs(h - h.conj().T)))

    def energy(self, state):
        vec = state.vector
        return float(np.real(np.vdot(vec, self.hamiltonian @ vec)))


@dataclass(frozen=True)
class Trajectory:
    """샘플 시각별 진폭과 적분 진단값"""

    times: np.ndarray
    g: np.ndarray
    e: np.ndarray
    norm_drift: np.ndarray
    energy_drift: np.ndarray
    tail_occupancy: np.ndarray
    dt: float
    steps: int = 0

    def __len__(self):
        return len(self.times)

    @property
    def times_plot(self):
        return physical_to_plot(self.times)

    def state(self, index):
        return AmplitudeState(g=self.g[index], e=self.e[index], t=float(self.times[index]))

    @property
    def final(self):
        return self.state(len(self) - 1)

    @property
    def max_norm_drift(self):
        return float(np.max(self.norm_drift))

    @property
    def max_energy_drift(self):
        return float(np.max(self.energy_drift))

    @property
    def max_tail_occupancy(self):
        return float(np.max(self.tail_occupancy))


# ------------------------------------------------------------------
# 생성자 / 초기 상태
# ------------------------------------------------------------------

def build_generator(p, F):
    """SystemParams 와 CouplingMatrix 로 H 를 구성합니다.

    대각: (ω̄/2)([m+1]_q + [m]_q) ∓ Δ̄/2 (g / e 블록)
    비대각: g 행 ← (1/2) F†, e 행 ← (1/2) F
    """
    if F.n_max != p.n_max:
        raise DimensionMismatchError(p.n_max, F.n_max)
    if F.epsilon != p.epsilon or F.deformation != p.deformation:
        raise ConfigurationError(
            'CouplingMatrix 의 epsilon/tau 가 SystemParams 와 다릅니다.',
            detail={
                'params': {'epsilon': p.epsilon, 'tau': p.tau},
                'coupling': {'epsilon': F.epsilon, 'tau': F.deformation.tau},
            },
        )

    dim = p.dim
    energies = trap_level_energies(p.n_max, p.omega_bar, p.deformation)
    h = np.zeros((2 * dim, 2 * dim), dtype=complex)
    h[:dim, :dim] = np.diag(energies - 0.5 * p.delta_bar)
    h[dim:, dim:] = np.diag(energies + 0.5 * p.delta_bar)
    h[:dim, dim:] = 0.5 * F.dagger
    h[dim:, :dim] = 0.5 * F.elements
    h.flags.writeable = False
    return Generator(hamiltonian=h, params=p)


def initial_cat_state(p):
    """(|g,β>_q + e^{iφ}|e,-β>_q) / √2"""
    plus = coherent_amplitudes(p.beta, p.deformation, p.n_max)
    minus = coherent_amplitudes(-p.beta, p.deformation, p.n_max)
    return AmplitudeState(
        g=plus / math.sqrt(2.0),
        e=np.exp(1j * p.phi) * minus / math.sqrt(2.0),
        t=0.0,
    )


def initial_branch_state(i, p):
    """캣 상태의 구성 성분 하나만으로 시작하는 상태 (i=1: |g,β>, i=2: |e,-β>)"""
    zeros = np.zeros(p.dim, dtype=complex)
    if i == 1:
        return AmplitudeState(g=coherent_amplitudes(p.beta, p.deformation, p.n_max), e=zeros, t=0.0)
    if i == 2:
        return AmplitudeState(g=zeros, e=coherent_amplitudes(-p.beta, p.deformation, p.n_max), t=0.0)
    raise ConfigurationError(f'branch 인덱스는 1 또는 2 입니다: {i}')


# ------------------------------------------------------------------
# 적분기
# ------------------------------------------------------------------

def check_step_guard(omega_bar, dt):
    if not dt > 0:
        raise ConfigurationError(f'dt는 양수여야 합니다: {dt}')
    if omega_bar * dt > STEP_GUARD:
        raise ConfigurationError(
            f'스텝 가드 위반: ω̄·dt = {omega_bar * dt:.3g} > {STEP_GUARD}',
            detail={'omega_bar': omega_bar, 'dt': dt},
        )


def rk4_step(vector, hamiltonian, h):
    """명시적 고전 RK4 한 스텝 (d/dt ψ = -iHψ)"""
    def deriv(psi):
        return -1j * (hamiltonian @ psi)

    k1 = deriv(vector)
    k2 = deriv(vector + 0.5 * h * k1)
    k3 = deriv(vector + 0.5 * h * k2)
    k4 = deriv(vector + h * k3)
    return vector + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def _exp_tail(z, start=5, terms=40):
    """Σ_{j>=start} z^j / j!"""
    term = z ** start / math.factorial(start)
    acc = term.copy()
    for j in range(start + 1, start + terms):
        term = term * z / j
        acc = acc + term
    return acc


class RK4Propagator:
    """고정 스텝 RK4 를 H 의 고유기저에서 정확히 거듭제곱 적용

    한 스텝의 증폭률 R(z), z = -iλh 는 e^z - tail(z) 이므로
    ln R(z)^n = nz + n·log1p(-e^{-z}·tail(z)) 로 계산합니다.
    """

    def __init__(self, generator):
        self.generator = generator
        self.energies, self.modes = scipy.linalg.eigh(generator.hamiltonian)
        self._cache = {}

    def log_amplification(self, interval, dt):
        n_steps = max(1, int(math.ceil(interval / dt - 1e-9)))
        key = (round(interval, 12), n_steps)
        if key not in self._cache:
            h = interval / n_steps
            z = -1j * self.energies * h
            correction = log1p(-np.exp(-z) * _exp_tail(z))
            self._cache[key] = (-1j * self.energies * interval + n_steps * correction, n_steps)
        return self._cache[key]

    def to_modes(self, vector):
        return self.modes.conj().T @ vector

    def from_modes(self, coefficients):
        return self.modes @ coefficients


def evolve(s0, generator, t_grid, dt=DEFAULT_DT, propagator=None,
           norm_abort=NORM_DRIFT_ABORT, tail_warn=TAIL_WARN):
    """s0 를 t_grid (물리 시간) 의 각 시각으로 전개

    각 구간은 dt 이하의 균등 서브스텝으로 나뉘어 격자점에 정확히 도달합니다.
    재정규화는 하지 않으며, 노름 드리프트가 norm_abort 를 넘으면 중단합니다.

    Returns:
        Trajectory
    """
    params = generator.params
    check_step_guard(params.omega_bar, dt)
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) == 0:
        raise ConfigurationError('t_grid 는 비어 있지 않은 1차원 배열이어야 합니다.')
    if abs(t_grid[0] - s0.t) > 1e-12:
        raise ConfigurationError(
            f't_grid 는 초기 상태 시각에서 시작해야 합니다: {t_grid[0]} != {s0.t}',
        )
    if np.any(np.diff(t_grid) <= 0):
        raise ConfigurationError('t_grid 는 순증가해야 합니다.')

    propagator = propagator or RK4Propagator(generator)
    dim = params.dim
    coefficients = propagator.to_modes(s0.vector)
    norm0 = float(np.sum(np.abs(coefficients) ** 2))
    energy0 = float(np.sum(propagator.energies * np.abs(coefficients) ** 2))
    energy_scale = abs(energy0) or 1.0

    count = len(t_grid)
    g = np.empty((count, dim), dtype=complex)
    e = np.empty((count, dim), dtype=complex)
    norm_drift = np.zeros(count)
    energy_drift = np.zeros(count)
    tail = np.zeros(count)
    total_steps = 0
    warned = False

    for index in range(count):
        if index > 0:
            log_amp, n_steps = propagator.log_amplification(t_grid[index] - t_grid[index - 1], dt)
            coefficients = coefficients * np.exp(log_amp)
            total_steps += n_steps
        vector = propagator.from_modes(coefficients)
        g[index] = vector[:dim]
        e[index] = vector[dim:]

        weights = np.abs(coefficients) ** 2
        norm_drift[index] = abs(float(np.sum(weights)) / norm0 - 1.0)
        energy_drift[index] = abs(float(np.sum(propagator.energies * weights)) - energy0) / energy_scale
        tail[index] = float(
            np.sum(np.abs(g[index, dim - TAIL_WIDTH:]) ** 2)
            + np.sum(np.abs(e[index, dim - TAIL_WIDTH:]) ** 2)
        )

        if norm_drift[index] > norm_abort:
            raise IntegratorDriftError(float(norm_drift[index]), norm_abort, float(t_grid[index]))
        if tail[index] > tail_warn and not warned:
            logger.warning(
                '기저 상단 점유율 %.3e > %.1e (t=%.6g, n_max=%d)',
                tail[index], tail_warn, t_grid[index], params.n_max,
            )
            warned = True

    return Trajectory(
        times=t_grid.copy(), g=g, e=e,
        norm_drift=norm_drift, energy_drift=energy_drift, tail_occupancy=tail,
        dt=dt, steps=total_steps,
    )
