"""
Admin configuration for analysis runs (read-only inspection)
"""
from django.contrib import admin

from .models import AnalysisRun


@admin.register(AnalysisRun)
class AnalysisRunAdmin(admin.ModelAdmin):
    """Admin configuration for AnalysisRun model"""

    list_display = ['source', 'rule', 'status', 'series_length', 'q_count', 'created_at']
    list_filter = ['status', 'rule', 'created_at']
    search_fields = ['source', 'rule']
    ordering = ['-created_at']
    readonly_fields = [
        'id', 'source', 'rule', 'status', 'series_length', 'config',
        'records', 'metadata', 'surface', 'error', 'created_at', 'updated_at',
    ]

    fieldsets = (
        (None, {'fields': ('id', 'source', 'rule', 'status', 'series_length')}),
        ('Results', {'fields': ('records', 'metadata', 'error'), 'classes': ('collapse',)}),
        ('Raw', {'fields': ('config', 'surface'), 'classes': ('collapse',)}),
        ('Timestamps', {'fields': ('created_at', 'updated_at')}),
    )

    def has_add_permission(self, request):
        return False

    def has_change_permission(self, request, obj=None):
        return False
