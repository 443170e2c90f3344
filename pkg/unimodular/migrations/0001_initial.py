# Generated by Django 5.2.4 on 2026-10-16 09:12

import uuid
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='RunReport',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('run_id', models.UUIDField(default=uuid.uuid4, editable=False, unique=True)),
                ('command', models.CharField(choices=[('compute', 'Compute LC'), ('table', 'Table reproduction'), ('roots', 'Root census'), ('mahler', 'Mahler measure'), ('trace', 'Boyd-Lawton trace'), ('export_registry', 'Registry export')], max_length=30)),
                ('poly_spec', models.CharField(blank=True, max_length=500)),
                ('method', models.CharField(blank=True, max_length=20)),
                ('config', models.JSONField(default=dict)),
                ('values', models.JSONField(default=dict)),
                ('diagnostics', models.JSONField(default=dict)),
                ('seconds', models.FloatField(default=0)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'db_table': 'run_reports',
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['command', 'method'], name='run_reports_cmd_method_idx')],
            },
        ),
    ]
