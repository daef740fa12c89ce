"""
시뮬레이션 어드민
"""
from django.contrib import admin

from .models import PeakRecordEntry, SimulationRun, SweepJob


class PeakRecordEntryInline(admin.TabularInline):
    model = PeakRecordEntry
    extra = 0
    fields = ('t_plot', 's_value', 'kind', 'envelope_amplitude')
    readonly_fields = fields
    can_delete = False


@admin.register(SimulationRun)
class SimulationRunAdmin(admin.ModelAdmin):
    list_display = (
        'id', 'kind', 'status', 'tau', 'beta_re', 'beta_im',
        'max_norm_drift', 'revival_contrast', 'sweep', 'created_at',
    )
    list_filter = ('kind', 'status')
    search_fields = ('out_dir', 'error_message')
    raw_id_fields = ('sweep',)
    readonly_fields = ('created_at', 'completed_at')
    date_hierarchy = 'created_at'
    inlines = [PeakRecordEntryInline]
    list_per_page = 30


class SimulationRunInline(admin.TabularInline):
    model = SimulationRun
    extra = 0
    fields = ('tau', 'beta_re', 'status', 'revival_contrast', 'error_code')
    readonly_fields = fields
    can_delete = False
    show_change_link = True


@admin.register(SweepJob)
class SweepJobAdmin(admin.ModelAdmin):
    list_display = ('id', 'status', 'cell_count', 'failed_count', 'out_dir', 'created_at')
    list_filter = ('status',)
    readonly_fields = ('created_at', 'completed_at')
    inlines = [SimulationRunInline]

    def get_queryset(self, request):
        return super().get_queryset(request).prefetch_related('runs')
