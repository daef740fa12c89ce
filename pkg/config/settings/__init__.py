# 설정 패키지 (manage.py 기본값: local, wsgi/celery 기본값: production)
