"""
Persisted analysis runs.
"""
from django.db import models
from django.utils.translation import gettext_lazy as _

from apps.core.models import BaseModel


class AnalysisRun(BaseModel):
    """
    One pipeline execution: its configuration, per-q records and, when it
    failed, the structured error.
    """
    class Status(models.TextChoices):
        COMPLETED = 'completed', _('Completed')
        FAILED = 'failed', _('Failed')

    source = models.CharField(
        max_length=512,
        verbose_name=_('Source'),
        help_text=_('Input file, inline values or generator name')
    )
    rule = models.CharField(max_length=64, db_index=True, verbose_name=_('Bin-width rule'))
    status = models.CharField(
        max_length=16,
        choices=Status.choices,
        default=Status.COMPLETED,
        db_index=True,
        verbose_name=_('Status')
    )
    series_length = models.PositiveIntegerField(null=True, blank=True, verbose_name=_('Series length'))
    config = models.JSONField(default=dict, verbose_name=_('Configuration'))
    records = models.JSONField(default=list, blank=True, verbose_name=_('Per-q records'))
    metadata = models.JSONField(default=dict, blank=True, verbose_name=_('Metadata'))
    surface = models.JSONField(
        null=True,
        blank=True,
        verbose_name=_('Entropy surface'),
        help_text=_('Rows (q, s, H) when the run was asked to keep them')
    )
    error = models.JSONField(null=True, blank=True, verbose_name=_('Error'))

    class Meta(BaseModel.Meta):
        verbose_name = _('Analysis run')
        verbose_name_plural = _('Analysis runs')

    def __str__(self):
        return f'{self.source} [{self.rule}] {self.status}'

    @property
    def q_count(self) -> int:
        return len(self.records or [])
