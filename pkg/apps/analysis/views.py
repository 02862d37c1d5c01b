"""
API views for running and browsing spectrum analyses.
"""
import logging

from django_filters.rest_framework import DjangoFilterBackend
from drf_yasg.utils import swagger_auto_schema
from rest_framework import filters, mixins, status, viewsets
from rest_framework.decorators import action
from rest_framework.exceptions import NotFound
from rest_framework.response import Response

from apps.core.exceptions import MultifractalError

from .filters import AnalysisRunFilter
from .models import AnalysisRun
from .serializers import AnalysisRunSerializer, AnalysisRunSummarySerializer, RunConfigSerializer
from .services import AnalysisService

logger = logging.getLogger(__name__)


class AnalysisRunViewSet(mixins.CreateModelMixin,
                         mixins.ListModelMixin,
                         mixins.RetrieveModelMixin,
                         viewsets.GenericViewSet):
    """
    Create runs from a generator or inline values, then list and inspect them.
    """
    queryset = AnalysisRun.objects.all()
    serializer_class = AnalysisRunSerializer
    filterset_class = AnalysisRunFilter
    filter_backends = [DjangoFilterBackend, filters.OrderingFilter]
    ordering_fields = ['created_at', 'series_length']
    ordering = ['-created_at']

    def get_serializer_class(self):
        if self.action == 'list':
            return AnalysisRunSummarySerializer
        if self.action == 'create':
            return RunConfigSerializer
        return AnalysisRunSerializer

    @swagger_auto_schema(request_body=RunConfigSerializer, responses={201: AnalysisRunSerializer})
    def create(self, request, *args, **kwargs):
        """Run the pipeline synchronously and store the outcome."""
        serializer = RunConfigSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        config = serializer.to_config()

        service = AnalysisService()
        try:
            report = service.run(config)
        except MultifractalError as exc:
            service.save_failure(config, exc)
            raise
        run = service.save(config, report)
        return Response(AnalysisRunSerializer(run).data, status=status.HTTP_201_CREATED)

    @action(detail=True, methods=['get'])
    def surface(self, request, pk=None):
        """The stored (q, s, H) rows of a run."""
        run = self.get_object()
        if run.surface is None:
            raise NotFound('This run was stored without its entropy surface')
        return Response({'id': str(run.id), 'count': len(run.surface), 'rows': run.surface})
