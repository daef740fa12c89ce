"""
Celery 설정 모듈

파라미터 스윕 셀을 워커에서 병렬 실행하기 위한 Celery 구성입니다.
CELERY_TASK_ALWAYS_EAGER=True 이면 태스크는 호출 프로세스에서 실행됩니다.
"""
import os
from celery import Celery

# Django 설정 모듈 지정
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings.production')

app = Celery('iontrap')

# namespace='CELERY'는 모든 Celery 관련 설정이 CELERY_ 접두사를 가짐을 의미
app.config_from_object('django.conf:settings', namespace='CELERY')

# 등록된 Django 앱에서 태스크 자동 발견
app.autodiscover_tasks()
