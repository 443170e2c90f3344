"""
Unimodular - Django Models
Persisted run reports: every value with the method and config that produced it.
"""

import uuid

from django.db import models


class RunReport(models.Model):
    """One command invocation and its results"""
    COMMAND_CHOICES = [
        ('compute', 'Compute LC'),
        ('table', 'Table reproduction'),
        ('roots', 'Root census'),
        ('mahler', 'Mahler measure'),
        ('trace', 'Boyd-Lawton trace'),
        ('export_registry', 'Registry export'),
    ]

    run_id = models.UUIDField(default=uuid.uuid4, editable=False, unique=True)
    command = models.CharField(max_length=30, choices=COMMAND_CHOICES)
    poly_spec = models.CharField(max_length=500, blank=True)
    method = models.CharField(max_length=20, blank=True)

    config = models.JSONField(default=dict)
    values = models.JSONField(default=dict)
    diagnostics = models.JSONField(default=dict)

    seconds = models.FloatField(default=0)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        db_table = 'run_reports'
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['command', 'method'], name='run_reports_cmd_method_idx'),
        ]

    def __str__(self):
        return f'{self.command} {self.poly_spec} ({self.method or "-"})'
