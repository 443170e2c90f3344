"""
Unimodular Admin Configuration
"""

from django.contrib import admin

from .models import RunReport


@admin.register(RunReport)
class RunReportAdmin(admin.ModelAdmin):
    list_display = ['command', 'poly_spec', 'method', 'headline_value', 'seconds', 'created_at']
    list_filter = ['command', 'method', 'created_at']
    search_fields = ['poly_spec', 'run_id']
    readonly_fields = ['run_id', 'config', 'values', 'diagnostics', 'seconds', 'created_at']
    date_hierarchy = 'created_at'

    def headline_value(self, obj):
        for key in ('lc', 'mahler', 'c_ratio', 'rows'):
            if key in obj.values:
                return obj.values[key]
        return '-'
    headline_value.short_description = 'Value'
