from django.apps import AppConfig


class SimulationConfig(AppConfig):
    """시뮬레이션 앱 설정"""
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.simulation'
    verbose_name = '이온 트랩 시뮬레이션'
