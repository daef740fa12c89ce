"""
스윕 완료 Slack 알림

SLACK_WEBHOOK_URL 이 설정된 경우에만 전송합니다.
"""
import logging

import requests
from django.conf import settings

logger = logging.getLogger(__name__)

MAX_LINES = 20


def _post_slack(payload):
    webhook_url = getattr(settings, 'SLACK_WEBHOOK_URL', '')
    if not webhook_url:
        return False
    try:
        resp = requests.post(webhook_url, json=payload, timeout=10)
        if resp.status_code != 200:
            logger.warning(
                'Slack 알림 발송 실패: status=%s body=%s',
                resp.status_code, resp.text[:200],
            )
            return False
    except requests.RequestException as e:
        logger.warning('Slack 알림 중 오류: %s', e)
        return False
    return True


def send_sweep_finished(job, rows):
    """스윕 완료 알림

    Args:
        job: SweepJob 인스턴스
        rows: SimulationService.summary_rows() 결과
    """
    lines = []
    for row in rows[:MAX_LINES]:
        if row['status'] == 'COMPLETED':
            contrast = row['revival_contrast'] or '-'
            lines.append(
                f"• τ={float(row['tau']):g}, β={float(row['beta_re']):g}"
                f": revival {row['revival_count']}개, 대비 {contrast}"
            )
        else:
            lines.append(
                f"• τ={float(row['tau']):g}, β={float(row['beta_re']):g}: *실패* ({row['error']})"
            )

    blocks = [
        {
            'type': 'header',
            'text': {
                'type': 'plain_text',
                'text': f'시뮬레이션 스윕 완료 ({job.cell_count}셀, 실패 {job.failed_count})',
                'emoji': True,
            },
        },
        {
            'type': 'section',
            'text': {'type': 'mrkdwn', 'text': '\n'.join(lines) or '_셀 없음_'},
        },
        {
            'type': 'context',
            'elements': [{'type': 'mrkdwn', 'text': f'출력 경로: {job.out_dir}'}],
        },
    ]
    if len(rows) > MAX_LINES:
        blocks.insert(2, {
            'type': 'section',
            'text': {'type': 'mrkdwn', 'text': f'_...외 {len(rows) - MAX_LINES}셀 더 있습니다._'},
        })

    return _post_slack({
        'text': f'시뮬레이션 스윕 완료: {job.cell_count}셀',
        'blocks': blocks,
    })
