import uuid

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='AnalysisRun',
            fields=[
                ('id', models.UUIDField(default=uuid.uuid4, editable=False, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True, help_text='Date and time when the record was created', verbose_name='Created At')),
                ('updated_at', models.DateTimeField(auto_now=True, help_text='Date and time when the record was last updated', verbose_name='Updated At')),
                ('source', models.CharField(help_text='Input file, inline values or generator name', max_length=512, verbose_name='Source')),
                ('rule', models.CharField(db_index=True, max_length=64, verbose_name='Bin-width rule')),
                ('status', models.CharField(choices=[('completed', 'Completed'), ('failed', 'Failed')], db_index=True, default='completed', max_length=16, verbose_name='Status')),
                ('series_length', models.PositiveIntegerField(blank=True, null=True, verbose_name='Series length')),
                ('config', models.JSONField(default=dict, verbose_name='Configuration')),
                ('records', models.JSONField(blank=True, default=list, verbose_name='Per-q records')),
                ('metadata', models.JSONField(blank=True, default=dict, verbose_name='Metadata')),
                ('surface', models.JSONField(blank=True, help_text='Rows (q, s, H) when the run was asked to keep them', null=True, verbose_name='Entropy surface')),
                ('error', models.JSONField(blank=True, null=True, verbose_name='Error')),
            ],
            options={
                'verbose_name': 'Analysis run',
                'verbose_name_plural': 'Analysis runs',
                'ordering': ['-created_at'],
                'abstract': False,
            },
        ),
    ]
