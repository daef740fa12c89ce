"""
Slack 알림 / 엑셀 출력 테스트
"""
import os
import tempfile
from unittest.mock import patch

import openpyxl
import requests
from django.test import TestCase, override_settings

from apps.simulation.analysis import COLLAPSE, INITIAL, REVIVAL, PeakRecord
from apps.simulation.excel import (
    DRIFT_FORMAT,
    PEAK_COLUMNS,
    VALUE_FORMAT,
    Column,
    build_workbook,
    peak_workbook,
    save_workbook,
)
from apps.simulation.services import SUMMARY_COLUMNS
from apps.simulation.models import SweepJob
from apps.simulation.slack import MAX_LINES, send_sweep_finished


def summary_row(tau, status='COMPLETED', contrast='3.5'):
    return {
        'tau': repr(float(tau)), 'beta_re': '4.0', 'beta_im': '0.0', 'status': status,
        'revival_count': 3 if status == 'COMPLETED' else '',
        'revival_contrast': contrast if status == 'COMPLETED' else '',
        'error': '' if status == 'COMPLETED' else 'truncation_leak',
    }


class SlackNotificationTest(TestCase):

    def setUp(self):
        self.job = SweepJob.objects.create(out_dir='/tmp/sweep', cell_count=2, failed_count=1, status='PARTIAL')
        self.rows = [summary_row(0.0), summary_row(0.004, status='FAILED')]

    @override_settings(SLACK_WEBHOOK_URL='')
    @patch('apps.simulation.slack.requests.post')
    def test_no_webhook(self, mock_post):
        self.assertFalse(send_sweep_finished(self.job, self.rows))
        mock_post.assert_not_called()

    @override_settings(SLACK_WEBHOOK_URL='https://hooks.slack.com/test')
    @patch('apps.simulation.slack.requests.post')
    def test_payload(self, mock_post):
        mock_post.return_value.status_code = 200
        self.assertTrue(send_sweep_finished(self.job, self.rows))

        args, kwargs = mock_post.call_args
        self.assertEqual(args[0], 'https://hooks.slack.com/test')
        self.assertEqual(kwargs['timeout'], 10)
        blocks = kwargs['json']['blocks']
        self.assertIn('2셀, 실패 1', blocks[0]['text']['text'])
        body = blocks[1]['text']['text']
        self.assertIn('revival 3개, 대비 3.5', body)
        self.assertIn('*실패* (truncation_leak)', body)

    @override_settings(SLACK_WEBHOOK_URL='https://hooks.slack.com/test')
    @patch('apps.simulation.slack.requests.post')
    def test_long_summary_is_truncated(self, mock_post):
        mock_post.return_value.status_code = 200
        rows = [summary_row(i * 0.001) for i in range(MAX_LINES + 5)]
        send_sweep_finished(self.job, rows)
        blocks = mock_post.call_args.kwargs['json']['blocks']
        self.assertEqual(len(blocks[1]['text']['text'].splitlines()), MAX_LINES)
        self.assertIn('5셀 더', blocks[2]['text']['text'])

    @override_settings(SLACK_WEBHOOK_URL='https://hooks.slack.com/test')
    @patch('apps.simulation.slack.requests.post')
    def test_http_error(self, mock_post):
        mock_post.return_value.status_code = 500
        mock_post.return_value.text = 'server error'
        with self.assertLogs('apps.simulation.slack', 'WARNING'):
            self.assertFalse(send_sweep_finished(self.job, self.rows))

    @override_settings(SLACK_WEBHOOK_URL='https://hooks.slack.com/test')
    @patch('apps.simulation.slack.requests.post', side_effect=requests.ConnectionError('down'))
    def test_connection_error(self, _mock_post):
        with self.assertLogs('apps.simulation.slack', 'WARNING'):
            self.assertFalse(send_sweep_finished(self.job, self.rows))


class ExcelTest(TestCase):

    def test_peak_workbook(self):
        records = [
            PeakRecord(0.0, 0.693, INITIAL, 0.0),
            PeakRecord(67.8, 0.731, REVIVAL, 0.21),
            PeakRecord(101.6, 0.2, COLLAPSE, 0.01),
        ]
        ws = peak_workbook(records).active
        self.assertEqual(ws.title, 'Peaks')
        self.assertEqual([c.value for c in ws[1]], [column.label for column in PEAK_COLUMNS])
        self.assertEqual(ws.max_row, 4)
        self.assertEqual(ws.cell(row=3, column=3).value, REVIVAL)
        self.assertEqual(ws.cell(row=3, column=1).value, 67.8)
        self.assertEqual(ws.cell(row=3, column=1).number_format, '0.0')
        self.assertEqual(ws.cell(row=3, column=2).number_format, VALUE_FORMAT)
        self.assertEqual(ws.cell(row=3, column=3).number_format, 'General')
        self.assertEqual(ws.freeze_panes, 'A2')

    def test_save_and_reload(self):
        columns = [('tau', 'tau', 10), ('status', '상태', 12)]
        wb = build_workbook([{'tau': '0.004', 'status': 'COMPLETED'}], columns, sheet_title='Sweep')
        with tempfile.TemporaryDirectory() as tmp:
            path = save_workbook(wb, os.path.join(tmp, 'summary.xlsx'))
            ws = openpyxl.load_workbook(path).active
        self.assertEqual(ws.title, 'Sweep')
        self.assertEqual(ws['A1'].value, 'tau')
        self.assertEqual(ws['B2'].value, 'COMPLETED')
        self.assertTrue(ws['A1'].font.bold)

    def test_summary_strings_become_numbers(self):
        row = {
            'tau': '0.0047', 'beta_re': '3', 'beta_im': '0', 'status': 'COMPLETED',
            'revival_count': '4', 'collapse_count': '3', 'revival_contrast': '',
            'revival_monotone': 'true', 'max_envelope': '0.21', 'max_norm_drift': '1.5e-12',
            'out_dir': '/tmp/cell', 'error': '',
        }
        ws = build_workbook([row], SUMMARY_COLUMNS, sheet_title='Sweep').active
        values = {column.key: ws.cell(row=2, column=i).value for i, column in enumerate(SUMMARY_COLUMNS, start=1)}
        self.assertEqual(values['tau'], 0.0047)
        self.assertEqual(values['revival_count'], 4.0)
        self.assertIsNone(values['revival_contrast'])
        self.assertEqual(values['max_norm_drift'], 1.5e-12)
        self.assertEqual(values['revival_monotone'], 'true')
        self.assertEqual(values['out_dir'], '/tmp/cell')
        drift_col = [c.key for c in SUMMARY_COLUMNS].index('max_norm_drift') + 1
        self.assertEqual(ws.cell(row=2, column=drift_col).number_format, DRIFT_FORMAT)

    def test_formatted_column_keeps_text(self):
        columns = [Column('tau', 'tau', 10, '0.0000')]
        ws = build_workbook([{'tau': 'n/a'}], columns).active
        self.assertEqual(ws['A2'].value, 'n/a')
