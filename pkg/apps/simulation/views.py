"""
시뮬레이션 실행 이력 조회 API
"""
from rest_framework.generics import ListAPIView, RetrieveAPIView
from rest_framework.permissions import IsAuthenticated

from .models import PeakRecordEntry, SimulationRun, SweepJob
from .serializers import (
    PeakRecordEntrySerializer,
    SimulationRunDetailSerializer,
    SimulationRunListSerializer,
    SweepJobSerializer,
)


class SimulationRunListView(ListAPIView):
    """실행 이력 목록

    GET /api/v1/simulation/runs/?kind=&status=&sweep_id=
    """
    permission_classes = [IsAuthenticated]
    serializer_class = SimulationRunListSerializer

    def get_queryset(self):
        qs = SimulationRun.objects.all()
        kind = self.request.query_params.get('kind')
        if kind:
            qs = qs.filter(kind=kind)
        status_param = self.request.query_params.get('status')
        if status_param:
            qs = qs.filter(status=status_param)
        sweep_id = self.request.query_params.get('sweep_id')
        if sweep_id:
            qs = qs.filter(sweep_id=sweep_id)
        return qs


class SimulationRunDetailView(RetrieveAPIView):
    """GET /api/v1/simulation/runs/<id>/"""
    permission_classes = [IsAuthenticated]
    serializer_class = SimulationRunDetailSerializer
    queryset = SimulationRun.objects.prefetch_related('peaks')


class RunPeakListView(ListAPIView):
    """GET /api/v1/simulation/runs/<id>/peaks/"""
    permission_classes = [IsAuthenticated]
    serializer_class = PeakRecordEntrySerializer
    pagination_class = None

    def get_queryset(self):
        return PeakRecordEntry.objects.filter(run_id=self.kwargs['pk']).order_by('t_plot')


class SweepJobListView(ListAPIView):
    """GET /api/v1/simulation/sweeps/"""
    permission_classes = [IsAuthenticated]
    serializer_class = SweepJobSerializer
    queryset = SweepJob.objects.all()
