"""
URL 설정

관리자, healthcheck, 시뮬레이션 실행 이력 API 를 제공합니다.
"""
from django.contrib import admin
from django.http import JsonResponse
from django.urls import include, path


def health_check(request):
    """healthcheck 엔드포인트"""
    return JsonResponse({'status': 'ok'})


urlpatterns = [
    path('health/', health_check, name='health_check'),

    # Django 관리자
    path('admin/', admin.site.urls),

    # API v1
    path('api/v1/simulation/', include('apps.simulation.urls')),
]
