"""
시뮬레이션 전체 플로우 통합 테스트

1. run → peaks → API 조회 (작은 기저, 짧은 구간)
2. 변형 트랩 기준 실행 (SIMULATION_SLOW_TESTS=1 일 때만)

변형 트랩 (tau > 0) 피크는 기준 테이블보다 체계적으로 이르게 나타나므로
기준 시각 일치 대신 run_meta 의 reference_offsets 기록과 정성적 성질만 검증합니다.
"""
import json
import math
import os
import shutil
import tempfile
import unittest
from io import StringIO

import numpy as np
from django.contrib.auth import get_user_model
from django.core.management import call_command
from django.test import SimpleTestCase, TestCase, override_settings
from django.urls import reverse
from rest_framework.test import APIClient

from apps.simulation import analysis
from apps.simulation.models import SimulationRun
from apps.simulation.observables import find_lobes
from apps.simulation.services import SimulationService, load_run_config

SLOW = bool(os.environ.get('SIMULATION_SLOW_TESTS'))
slow_test = unittest.skipUnless(SLOW, 'SIMULATION_SLOW_TESTS=1 로 실행')


class RunFlowIntegrationTest(TestCase):
    """run 명령 → 파일 → peaks 재분석 → 이력 API"""

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.out_dir = os.path.join(self.tmp, 'run')
        self.config_path = os.path.join(self.tmp, 'config.json')
        with open(self.config_path, 'w', encoding='utf-8') as fp:
            json.dump({
                't_end_plot': 20.0,
                'params': {'beta': 2.0, 'n_max': 16, 'tau': 0.004},
                'qfunc_window': {'half_width': 3.0, 'step': 0.25},
            }, fp)

    def tearDown(self):
        shutil.rmtree(self.tmp, ignore_errors=True)

    def test_full_flow(self):
        call_command('run', config=self.config_path, out_dir=self.out_dir, times='0', stdout=StringIO())

        with open(os.path.join(self.out_dir, 'run_meta.json'), encoding='utf-8') as fp:
            meta = json.load(fp)
        self.assertEqual(meta['config']['params']['tau'], 0.004)
        self.assertLess(meta['diagnostics']['max_norm_drift'], 1e-8)
        self.assertEqual(len(meta['qfunc']['0']['lobes']), 2)

        with open(os.path.join(self.out_dir, 'peaks.csv'), encoding='utf-8') as fp:
            original = fp.read()
        call_command('peaks', config=self.config_path, out_dir=self.out_dir, stdout=StringIO())
        with open(os.path.join(self.out_dir, 'peaks.csv'), encoding='utf-8') as fp:
            self.assertEqual(fp.read(), original)

        run = SimulationRun.objects.get()
        user = get_user_model().objects.create_user(username='flow', password='pass1234!')
        client = APIClient()
        client.force_authenticate(user=user)
        response = client.get(reverse('simulation:run-detail', args=[run.id]))
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.data['status'], 'COMPLETED')
        self.assertEqual(len(response.data['peaks']), len(original.splitlines()) - 1)
        self.assertAlmostEqual(response.data['peaks'][0]['s_value'], math.log(2), places=10)


# ============================================================================
# 기준 수치 재현 (느림)
# ============================================================================

@slow_test
class ReferenceRunTest(SimpleTestCase):
    """β=4 기준 실행 (t_plot 500, n_max 32)"""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.harmonic = SimulationService.simulate(load_run_config(overrides={'params': {'tau': 0.0}}))
        cls.deformed = SimulationService.simulate(load_run_config(overrides={'params': {'tau': 0.004}}))

    def test_initial_entropy(self):
        for result in (self.harmonic, self.deformed):
            self.assertLess(abs(result.series.S_P[0] - math.log(2)), 1e-10)

    def test_unitarity(self):
        summary = self.deformed.summary()
        self.assertLess(summary['max_norm_drift'], 1e-8)
        self.assertLess(summary['max_energy_drift'], 1e-8)

    def test_entropy_non_negative(self):
        self.assertTrue(np.all(self.deformed.series.S_P >= -1e-12))

    def test_deformed_peaks_come_earlier(self):
        harmonic_first = self.harmonic.records[1].t_plot
        deformed_first = self.deformed.records[1].t_plot
        self.assertAlmostEqual(harmonic_first, 85.8, delta=0.05 * 85.8)
        self.assertLess(deformed_first, harmonic_first)

    def test_reference_offsets_recorded(self):
        report = analysis.peak_table(self.deformed.records)
        meta = SimulationService.run_meta(self.deformed, report)['analysis']
        self.assertEqual(len(meta['reference_comparison']), 7)
        offsets = meta['reference_offsets']
        self.assertIsNotNone(offsets)
        self.assertTrue(math.isfinite(offsets['mean_relative_time_offset']))
        self.assertTrue(math.isfinite(offsets['mean_value_offset']))
        self.assertIn(meta['revival_verdict'], (
            analysis.VERDICT_DECREASING, analysis.VERDICT_NOT_DECREASING, analysis.VERDICT_INSUFFICIENT,
        ))


@slow_test
class StrongDeformationTest(SimpleTestCase):

    def test_no_revival(self):
        result = SimulationService.simulate(load_run_config(overrides={'params': {'tau': 0.1}}))
        envelope = analysis.inversion_envelope(result.series.t_plot, result.series.I, 10.0)
        self.assertFalse([r for r in result.records if r.kind == analysis.REVIVAL])
        self.assertLess(float(np.max(envelope[50:])), 0.05)


@slow_test
class BetaThreeDeformedTest(SimpleTestCase):

    def test_first_peak(self):
        base = load_run_config(overrides={'params': {'beta': 3.0}})
        deformed = SimulationService.simulate(base.with_cell(0.0047, 3.0))
        self.assertLess(abs(deformed.series.S_P[0] - math.log(2)), 1e-10)
        first = deformed.records[1]
        self.assertAlmostEqual(first.t_plot, 47.4, delta=0.1 * 47.4)
        self.assertAlmostEqual(first.s_value, 0.65, delta=0.05)
        comparison = analysis.compare_with_reference(deformed.records, 3.0, 0.0047)
        self.assertEqual(len(comparison), 7)


@slow_test
@override_settings(SLACK_WEBHOOK_URL='')
class QFunctionRevivalTest(TestCase):

    def test_lobes_at_start_and_first_revival(self):
        first_revival = analysis.reference_peaks(4.0, 0.0)[1][0]
        config = load_run_config(overrides={'qfunc_times': [0.0, first_revival], 'outputs': ['qfunc']})
        grids = SimulationService.compute_qfunctions(config)

        start = sorted(find_lobes(grids[0.0])[:2])
        self.assertAlmostEqual(start[0][0], -4.0, delta=0.2)
        self.assertAlmostEqual(start[1][0], 4.0, delta=0.2)
        self.assertAlmostEqual(grids[0.0].normalization(), 1.0, delta=0.01)

        revival = find_lobes(grids[first_revival])[:2]
        self.assertEqual(len(revival), 2)
        for re, _im, _q in revival:
            self.assertLess(abs(re), 1.0)
        self.assertLess(revival[0][1] * revival[1][1], 0.0)
