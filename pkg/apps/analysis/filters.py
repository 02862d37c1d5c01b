"""
Filters for analysis runs.
"""
from django_filters import rest_framework as filters

from .models import AnalysisRun


class AnalysisRunFilter(filters.FilterSet):
    """
    Filtering for stored runs by outcome, rule, size and date.
    """
    status = filters.ChoiceFilter(choices=AnalysisRun.Status.choices)
    rule = filters.CharFilter(field_name='rule', lookup_expr='iexact')
    source = filters.CharFilter(field_name='source', lookup_expr='icontains')
    min_length = filters.NumberFilter(field_name='series_length', lookup_expr='gte')
    max_length = filters.NumberFilter(field_name='series_length', lookup_expr='lte')
    created_after = filters.DateTimeFilter(field_name='created_at', lookup_expr='gte')
    created_before = filters.DateTimeFilter(field_name='created_at', lookup_expr='lte')

    class Meta:
        model = AnalysisRun
        fields = ['status', 'rule', 'source']
