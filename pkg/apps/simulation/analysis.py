"""
S(P) 피크 분석

S(P) 시계열에서 피크를 찾고, 반전 I(t) 의 국소 포락선으로
revival / collapse 를 분류한 뒤 CSV·텍스트 리포트를 만듭니다.
"""
import csv
import io
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.ndimage import uniform_filter1d
from scipy.signal import find_peaks

from .exceptions import ConfigurationError, EmptySeriesError

INITIAL = 'initial'
REVIVAL = 'revival'
COLLAPSE = 'collapse'
UNCLASSIFIED = 'unclassified'

KIND_CHOICES = (INITIAL, REVIVAL, COLLAPSE, UNCLASSIFIED)

# 임계값 대비 이 비율 이내면 unclassified
UNCLASSIFIED_BAND = 0.2

PEAK_CSV_HEADER = ('t_plot', 's_p', 'kind', 'envelope_amplitude')

VERDICT_DECREASING = 'decreasing'
VERDICT_NOT_DECREASING = 'not_decreasing'
VERDICT_INSUFFICIENT = 'insufficient'

# 기준 피크 테이블: (beta, tau) → [(t_plot, S(P), kind 또는 None), ...]
REFERENCE_PEAKS = {
    (3.0, 0.0047): [
        (0.0, 0.693, INITIAL),
        (58.6, 0.628, REVIVAL),
        (114.0, 0.314, COLLAPSE),
        (175.6, 0.285, REVIVAL),
        (234.0, 0.220, COLLAPSE),
        (295.6, 0.181, REVIVAL),
        (360.0, 0.234, COLLAPSE),
        (415.4, 0.175, REVIVAL),
    ],
    (4.0, 0.0): [
        (0.0, 0.693, INITIAL),
        (85.8, 0.333, REVIVAL),
        (171.4, 0.143, COLLAPSE),
        (266.8, 0.106, REVIVAL),
        (388.2, 0.085, None),
        (447.6, 0.076, None),
    ],
    (4.0, 0.004): [
        (0.0, 0.693, INITIAL),
        (67.8, 0.731, REVIVAL),
        (133.2, 0.497, COLLAPSE),
        (201.2, 0.512, REVIVAL),
        (266.6, 0.359, COLLAPSE),
        (336.8, 0.397, REVIVAL),
        (404.8, 0.334, COLLAPSE),
        (472.6, 0.324, REVIVAL),
    ],
}


@dataclass(frozen=True)
class PeakRecord:
    t_plot: float
    s_value: float
    kind: str = UNCLASSIFIED
    envelope_amplitude: float = 0.0

    def to_dict(self):
        return {
            't_plot': self.t_plot,
            's_p': self.s_value,
            'kind': self.kind,
            'envelope_amplitude': self.envelope_amplitude,
        }


@dataclass(frozen=True)
class PeakReport:
    """peak_table() 결과: CSV 문자열, 정렬된 텍스트, revival 단조성 판정"""

    csv: str
    text: str
    verdict: str


# ------------------------------------------------------------------
# 피크 검출
# ------------------------------------------------------------------

def _as_series(t, values):
    t = np.asarray(t, dtype=float)
    values = np.asarray(values, dtype=float)
    if t.size == 0 or values.size == 0:
        raise EmptySeriesError()
    if t.shape != values.shape:
        raise ConfigurationError(
            '시간 축과 값 배열의 길이가 다릅니다.',
            detail={'t': int(t.size), 'values': int(values.size)},
        )
    return t, values


def _spacing(t):
    return float(t[1] - t[0]) if len(t) > 1 else 0.0


def _window_points(window, spacing):
    """폭 window 의 중심 이동 평균에 해당하는 홀수 샘플 수"""
    if spacing <= 0 or window <= 0:
        return 1
    points = int(round(window / spacing))
    return points + 1 if points % 2 == 0 else points


def smooth_series(t, values, window):
    """폭 window (t_plot 단위) 중심 이동 평균"""
    t, values = _as_series(t, values)
    size = _window_points(window, _spacing(t))
    if size <= 1:
        return values.copy()
    return uniform_filter1d(values, size=size, mode='nearest')


def detect_peaks(t, s_p, smooth_window=8.0, prominence=0.02):
    """평활화한 S(P) 의 국소 최대 (prominence 이상) 를 PeakRecord 로 반환

    기본 폭 8 은 S(P) 의 Rabi 잔진동 (주기 약 2.6) 을 여러 주기 평균합니다.
    피크 위치는 평활 창 안에서 원 시계열의 최댓값 샘플로 보정하므로 항상
    샘플 격자 위에 놓입니다. t=0 레코드 (initial) 는 항상 포함됩니다.
    """
    if smooth_window < 0:
        raise ConfigurationError(f'smooth_window는 0 이상이어야 합니다: {smooth_window}')
    if not prominence > 0:
        raise ConfigurationError(f'prominence는 양수여야 합니다: {prominence}')
    t, s_p = _as_series(t, s_p)

    size = _window_points(smooth_window, _spacing(t))
    smoothed = smooth_series(t, s_p, smooth_window)
    indices, _props = find_peaks(smoothed, prominence=prominence)

    half = max(1, size // 2)
    refined = set()
    for index in indices:
        lo = max(0, index - half)
        hi = min(len(s_p), index + half + 1)
        best = lo + int(np.argmax(s_p[lo:hi]))
        if best > 0:
            refined.add(best)

    records = [PeakRecord(t_plot=float(t[0]), s_value=float(s_p[0]), kind=INITIAL)]
    for index in sorted(refined):
        records.append(PeakRecord(t_plot=float(t[index]), s_value=float(s_p[index])))
    return records


def envelope_amplitude_at(t, inversion, center, window):
    """[center-window, center+window] 구간의 RMS(I - mean I)"""
    mask = np.abs(t - center) <= window + 1e-9
    segment = inversion[mask]
    if segment.size == 0:
        return 0.0
    return float(np.sqrt(np.mean((segment - segment.mean()) ** 2)))


def classify_peaks(peaks, t, inversion, window=10.0, threshold=0.05):
    """envelope_amplitude ≥ threshold 면 revival, 아니면 collapse

    envelope_amplitude 가 threshold 의 ±20% 이내면 unclassified 로 표시합니다.
    initial 레코드는 kind 를 유지하고 envelope_amplitude 만 채웁니다.
    """
    if window <= 0 or threshold <= 0:
        raise ConfigurationError(
            'window, threshold 는 양수여야 합니다.',
            detail={'window': window, 'threshold': threshold},
        )
    t, inversion = _as_series(t, inversion)

    classified = []
    for peak in peaks:
        amplitude = envelope_amplitude_at(t, inversion, peak.t_plot, window)
        if peak.kind == INITIAL:
            kind = INITIAL
        elif abs(amplitude - threshold) <= UNCLASSIFIED_BAND * threshold:
            kind = UNCLASSIFIED
        elif amplitude >= threshold:
            kind = REVIVAL
        else:
            kind = COLLAPSE
        classified.append(replace(peak, kind=kind, envelope_amplitude=amplitude))
    return classified


def inversion_envelope(t, inversion, window=10.0):
    """반전의 이동 RMS 포락선 (classify_peaks 와 같은 창 폭)"""
    t, inversion = _as_series(t, inversion)
    size = _window_points(2.0 * window, _spacing(t))
    if size <= 1:
        return np.zeros_like(inversion)
    mean = uniform_filter1d(inversion, size=size, mode='nearest')
    mean_sq = uniform_filter1d(inversion ** 2, size=size, mode='nearest')
    return np.sqrt(np.clip(mean_sq - mean ** 2, 0.0, None))


# ------------------------------------------------------------------
# 지표
# ------------------------------------------------------------------

def revival_monotonicity(records):
    """revival 피크의 S(P) 가 순감소하면 True, revival 이 2개 미만이면 None"""
    values = [r.s_value for r in records if r.kind == REVIVAL]
    if len(values) < 2:
        return None
    return all(later < earlier for earlier, later in zip(values, values[1:]))


def revival_contrast(records):
    """max(revival 포락선) / max(collapse 포락선)

    revival 이나 collapse 가 없거나 collapse 포락선이 0 이면 None.
    """
    revivals = [r.envelope_amplitude for r in records if r.kind == REVIVAL]
    collapses = [r.envelope_amplitude for r in records if r.kind == COLLAPSE]
    if not revivals or not collapses:
        return None
    denominator = max(collapses)
    if denominator <= 0:
        return None
    return max(revivals) / denominator


def _verdict(records):
    monotone = revival_monotonicity(records)
    if monotone is None:
        return VERDICT_INSUFFICIENT
    return VERDICT_DECREASING if monotone else VERDICT_NOT_DECREASING


# ------------------------------------------------------------------
# 리포트
# ------------------------------------------------------------------

def format_g6(value):
    return '%.6g' % value


def peak_table(records):
    """PeakRecord 리스트 → PeakReport (CSV 6 유효숫자 + 정렬 텍스트 + 판정)"""
    records = sorted(records, key=lambda r: r.t_plot)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(PEAK_CSV_HEADER)
    for r in records:
        writer.writerow([
            format_g6(r.t_plot), format_g6(r.s_value), r.kind, format_g6(r.envelope_amplitude),
        ])

    verdict = _verdict(records)
    lines = [f'{"t":>10}  {"S(P)":>8}  {"kind":<12}']
    lines.append('-' * len(lines[0]))
    for r in records:
        lines.append(f'{r.t_plot:>10.1f}  {r.s_value:>8.3f}  {r.kind:<12}')
    lines.append('')
    lines.append(f'revival maxima: {verdict}')
    return PeakReport(csv=buf.getvalue(), text='\n'.join(lines) + '\n', verdict=verdict)


def read_peak_csv(path):
    """peaks.csv → PeakRecord 리스트"""
    with open(path, newline='') as fp:
        return [
            PeakRecord(
                t_plot=float(row['t_plot']),
                s_value=float(row['s_p']),
                kind=row['kind'],
                envelope_amplitude=float(row['envelope_amplitude']),
            )
            for row in csv.DictReader(fp)
        ]


def reference_peaks(beta, tau):
    """기준 피크 테이블 조회 (없으면 None)"""
    for (ref_beta, ref_tau), rows in REFERENCE_PEAKS.items():
        if math.isclose(abs(beta), ref_beta) and math.isclose(tau, ref_tau, abs_tol=1e-12):
            return rows
    return None


def compare_with_reference(records, beta, tau, time_tol=0.05, value_tol=0.03):
    """검출 피크를 기준 테이블과 대조

    각 기준 피크 (initial 제외) 에 대해 시각이 가장 가까운 검출 피크를 짝짓고,
    상대 시각 오차 ≤ time_tol, S(P) 절대 오차 ≤ value_tol 여부를 반환합니다.
    기준 테이블이 없으면 빈 리스트.
    """
    rows = reference_peaks(beta, tau)
    if not rows:
        return []
    candidates = [r for r in records if r.kind != INITIAL]
    comparison = []
    for ref_t, ref_s, ref_kind in rows:
        if ref_kind == INITIAL:
            continue
        match = min(candidates, key=lambda r: abs(r.t_plot - ref_t)) if candidates else None
        comparison.append({
            'reference_t': ref_t,
            'reference_s': ref_s,
            'reference_kind': ref_kind,
            't_plot': match.t_plot if match else None,
            's_p': match.s_value if match else None,
            'kind': match.kind if match else None,
            'time_ok': bool(match and abs(match.t_plot - ref_t) <= time_tol * ref_t),
            'value_ok': bool(match and abs(match.s_value - ref_s) <= value_tol),
        })
    return comparison
