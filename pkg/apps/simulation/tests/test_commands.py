"""
관리 명령어 테스트 (run / qfunc / peaks / sweep)
"""
import json
import os
import shutil
import tempfile
from io import StringIO
from unittest.mock import patch

from django.core.management import call_command
from django.test import TestCase, override_settings

from apps.simulation.models import SimulationRun, SweepJob
from apps.simulation.services import SimulationService

SMALL_CONFIG = {
    't_end_plot': 10.0,
    'params': {'beta': 2.0, 'n_max': 16},
    'qfunc_window': {'half_width': 2.0, 'step': 0.5},
}


class CommandTestBase(TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.config_path = os.path.join(self.tmp, 'config.json')
        with open(self.config_path, 'w', encoding='utf-8') as fp:
            json.dump(SMALL_CONFIG, fp)
        self.out_dir = os.path.join(self.tmp, 'out')

    def tearDown(self):
        shutil.rmtree(self.tmp, ignore_errors=True)

    def call(self, name, **options):
        stdout, stderr = StringIO(), StringIO()
        call_command(name, config=self.config_path, out_dir=self.out_dir, stdout=stdout, stderr=stderr, **options)
        return stdout.getvalue(), stderr.getvalue()

    def call_failing(self, name, **options):
        stderr = StringIO()
        with self.assertRaises(SystemExit) as ctx:
            call_command(
                name, config=self.config_path, out_dir=self.out_dir,
                stdout=StringIO(), stderr=stderr, **options,
            )
        return ctx.exception.code, json.loads(stderr.getvalue())


class RunCommandTest(CommandTestBase):

    def test_run(self):
        stdout, _stderr = self.call('run', times='0,5')
        for name in ('timeseries.csv', 'envelope.csv', 'peaks.csv', 'run_meta.json', 'qfunc_t0.csv', 'qfunc_t5.csv'):
            self.assertTrue(os.path.exists(os.path.join(self.out_dir, name)), msg=name)
        self.assertIn('revival maxima:', stdout)
        self.assertEqual(SimulationRun.objects.get().status, 'COMPLETED')

    def test_flags_override_file(self):
        self.call('run', tau='0.004', t_end='5', no_record=True)
        with open(os.path.join(self.out_dir, 'run_meta.json'), encoding='utf-8') as fp:
            config = json.load(fp)['config']
        self.assertEqual(config['params']['tau'], 0.004)
        self.assertEqual(config['params']['n_max'], 16)
        self.assertEqual(config['t_end_plot'], 5.0)
        self.assertFalse(SimulationRun.objects.exists())

    def test_xlsx(self):
        self.call('run', no_record=True, xlsx=True)
        self.assertTrue(os.path.exists(os.path.join(self.out_dir, 'peaks.xlsx')))

    def test_step_guard_violation(self):
        code, payload = self.call_failing('run', dt='0.01')
        self.assertEqual(code, 2)
        self.assertEqual(payload['error'], 'configuration_error')
        self.assertIn('dt', payload['detail'])
        self.assertFalse(os.path.exists(os.path.join(self.out_dir, 'timeseries.csv')))

    def test_invalid_beta(self):
        code, payload = self.call_failing('run', beta='four')
        self.assertEqual(code, 2)
        self.assertEqual(payload['error'], 'configuration_error')

    def test_missing_config_file(self):
        self.config_path = os.path.join(self.tmp, 'missing.json')
        code, _payload = self.call_failing('run')
        self.assertEqual(code, 2)

    def test_truncation_leak_exit_code(self):
        with open(self.config_path, 'w', encoding='utf-8') as fp:
            json.dump({**SMALL_CONFIG, 'params': {'beta': 4.0, 'n_max': 16}, 'tail_warn': 1e-9, 'tail_error': 1e-8}, fp)
        code, payload = self.call_failing('run', no_record=True)
        self.assertEqual(code, 1)
        self.assertEqual(payload['error'], 'truncation_leak')

    def test_unexpected_error_is_reported_as_json(self):
        with patch.object(SimulationService, 'execute_run', side_effect=OSError('disk full')):
            with self.assertLogs('apps.simulation', 'ERROR'):
                code, payload = self.call_failing('run')
        self.assertEqual(code, 1)
        self.assertEqual(payload['error'], 'unexpected')
        self.assertEqual(payload['message'], 'disk full')
        self.assertEqual(payload['detail'], {'type': 'OSError'})

        run = SimulationRun.objects.get()
        self.assertEqual(run.status, 'FAILED')
        self.assertEqual(run.error_code, 'unexpected')


class QFuncCommandTest(CommandTestBase):

    def test_qfunc(self):
        stdout, _stderr = self.call('qfunc', times='0,2.5')
        self.assertTrue(os.path.exists(os.path.join(self.out_dir, 'qfunc_t0.csv')))
        self.assertTrue(os.path.exists(os.path.join(self.out_dir, 'qfunc_t2.5.csv')))
        self.assertFalse(os.path.exists(os.path.join(self.out_dir, 'timeseries.csv')))
        self.assertIn('2개 격자 기록', stdout)

        run = SimulationRun.objects.get()
        self.assertEqual(run.kind, 'QFUNC')
        self.assertEqual(run.status, 'COMPLETED')
        self.assertEqual(run.out_dir, self.out_dir)
        self.assertFalse(run.peaks.exists())

    def test_qfunc_no_record(self):
        self.call('qfunc', times='0', no_record=True)
        self.assertTrue(os.path.exists(os.path.join(self.out_dir, 'qfunc_t0.csv')))
        self.assertFalse(SimulationRun.objects.exists())

    def test_qfunc_without_times(self):
        code, payload = self.call_failing('qfunc')
        self.assertEqual(code, 2)
        self.assertEqual(payload['error'], 'configuration_error')
        run = SimulationRun.objects.get()
        self.assertEqual((run.kind, run.status), ('QFUNC', 'FAILED'))

    def test_time_after_end(self):
        code, payload = self.call_failing('qfunc', times='20')
        self.assertEqual(code, 2)
        self.assertIn('qfunc_times', payload['detail'])


class PeaksCommandTest(CommandTestBase):

    def test_reanalysis(self):
        self.call('run', no_record=True)
        with open(os.path.join(self.out_dir, 'peaks.csv'), encoding='utf-8') as fp:
            original = fp.read()
        os.remove(os.path.join(self.out_dir, 'peaks.csv'))

        stdout, _stderr = self.call('peaks')
        with open(os.path.join(self.out_dir, 'peaks.csv'), encoding='utf-8') as fp:
            self.assertEqual(fp.read(), original)
        self.assertIn('revival maxima:', stdout)

    def test_missing_timeseries(self):
        code, payload = self.call_failing('peaks')
        self.assertEqual(code, 2)
        self.assertIn('path', payload['detail'])


@override_settings(SLACK_WEBHOOK_URL='')
class SweepCommandTest(CommandTestBase):

    def test_sweep(self):
        stdout, _stderr = self.call('sweep', tau='0,0.004', beta='2', no_notify=True)
        self.assertTrue(os.path.exists(os.path.join(self.out_dir, 'summary.csv')))
        self.assertTrue(os.path.isdir(os.path.join(self.out_dir, 'tau_0.004_beta_2')))
        job = SweepJob.objects.get()
        self.assertEqual(job.cell_count, 2)
        self.assertEqual(job.runs.count(), 2)
        self.assertIn('스윕 완료: 2셀, 실패 0', stdout)

    def test_invalid_tau_list(self):
        code, payload = self.call_failing('sweep', tau='0,abc', no_notify=True)
        self.assertEqual(code, 2)
        self.assertEqual(payload['detail'], {'tau': 'abc'})
