"""
시뮬레이션 API URL 설정
"""
from django.urls import path

from . import views

app_name = 'simulation'

urlpatterns = [
    path('runs/', views.SimulationRunListView.as_view(), name='run-list'),
    path('runs/<int:pk>/', views.SimulationRunDetailView.as_view(), name='run-detail'),
    path('runs/<int:pk>/peaks/', views.RunPeakListView.as_view(), name='run-peaks'),
    path('sweeps/', views.SweepJobListView.as_view(), name='sweep-list'),
]
