"""
시뮬레이션 Celery 태스크

스윕 셀을 워커에서 실행합니다. 셀 실패는 결과 dict 로 돌려주며
그룹 전체를 중단시키지 않습니다.
"""
import logging

from config.celery import app

logger = logging.getLogger(__name__)


@app.task(bind=True)
def run_sweep_cell(self, config_dict, out_dir):
    """스윕 셀 하나 실행 (DB 접근 없음)

    Args:
        config_dict: RunConfig.to_dict() 결과
        out_dir: 셀 출력 경로
    """
    from .services import SimulationService

    logger.info('스윕 셀 태스크 시작: %s', out_dir)
    return SimulationService.run_cell(config_dict, out_dir)
