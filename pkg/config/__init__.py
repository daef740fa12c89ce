# 스윕 셀 태스크가 워커에서 등록되도록 Celery 앱을 함께 로드
from .celery import app as celery_app

__all__ = ('celery_app',)
