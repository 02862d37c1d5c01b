"""
Test cases for the analysis API using pytest and model_bakery
"""
import numpy as np
import pytest
from django.urls import reverse
from model_bakery import baker
from rest_framework import status
from rest_framework.test import APIClient

from apps.analysis.models import AnalysisRun


@pytest.fixture
def api_client():
    """Create an API client for testing"""
    return APIClient()


@pytest.fixture
def small_run_payload():
    return {'generator': 'gaussian-walk', 'length': 512, 'q_min': 1, 'q_max': 3, 'q_step': 1, 'seed': 4}


@pytest.fixture
def completed_run():
    return baker.make(
        AnalysisRun,
        source='generator:gaussian-walk',
        rule='scott',
        status=AnalysisRun.Status.COMPLETED,
        series_length=1024,
        records=[],
        surface=None,
    )


@pytest.mark.django_db
class TestRunCreate:
    """Test running the pipeline through the API"""

    def test_create_from_generator(self, api_client, small_run_payload):
        response = api_client.post(reverse('analysis-run-list'), small_run_payload, format='json')
        assert response.status_code == status.HTTP_201_CREATED
        assert response.data['status'] == 'completed'
        assert [r['q'] for r in response.data['records']] == [1.0, 2.0, 3.0]
        assert AnalysisRun.objects.count() == 1

    def test_create_from_values(self, api_client):
        values = np.random.default_rng(1).standard_normal(600).tolist()
        payload = {'values': values, 'q_min': 1, 'q_max': 2, 'q_step': 0.5, 'rule': 'fd'}
        response = api_client.post(reverse('analysis-run-list'), payload, format='json')
        assert response.status_code == status.HTTP_201_CREATED
        assert response.data['source'] == 'inline'
        assert response.data['rule'] == 'fd'
        assert response.data['series_length'] == 600

    def test_invalid_config(self, api_client):
        payload = {'generator': 'gaussian-walk', 'values': [1.0, 2.0]}
        response = api_client.post(reverse('analysis-run-list'), payload, format='json')
        assert response.status_code == status.HTTP_400_BAD_REQUEST
        assert response.data['success'] is False
        assert AnalysisRun.objects.count() == 0

    def test_file_input_not_available(self, api_client):
        response = api_client.post(reverse('analysis-run-list'), {'input': '/etc/passwd'}, format='json')
        assert response.status_code == status.HTTP_400_BAD_REQUEST

    def test_numeric_failure_is_stored(self, api_client):
        payload = {'values': [3.0] * 300, 'q_min': 1, 'q_max': 3, 'q_step': 1}
        response = api_client.post(reverse('analysis-run-list'), payload, format='json')
        assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
        assert response.data['error']['code'] == 'degenerate_ensemble'
        assert AnalysisRun.objects.get().status == AnalysisRun.Status.FAILED

    def test_short_series(self, api_client):
        response = api_client.post(reverse('analysis-run-list'), {'values': [0.1, 0.2, 0.3]}, format='json')
        assert response.status_code == status.HTTP_400_BAD_REQUEST
        assert response.data['error']['code'] == 'insufficient_data'


@pytest.mark.django_db
class TestRunBrowse:
    """Test listing, retrieving and surface access"""

    def test_list(self, api_client, completed_run):
        baker.make(AnalysisRun, source='inline', rule='fd', status=AnalysisRun.Status.FAILED)
        response = api_client.get(reverse('analysis-run-list'))
        assert response.status_code == status.HTTP_200_OK
        assert response.data['count'] == 2
        assert 'records' not in response.data['results'][0]

    def test_filter_by_status(self, api_client, completed_run):
        baker.make(AnalysisRun, source='inline', rule='fd', status=AnalysisRun.Status.FAILED)
        response = api_client.get(reverse('analysis-run-list'), {'status': 'failed'})
        assert response.data['count'] == 1
        assert response.data['results'][0]['rule'] == 'fd'

    def test_filter_by_rule(self, api_client, completed_run):
        response = api_client.get(reverse('analysis-run-list'), {'rule': 'SCOTT'})
        assert response.data['count'] == 1

    def test_retrieve(self, api_client, completed_run):
        response = api_client.get(reverse('analysis-run-detail', kwargs={'pk': completed_run.pk}))
        assert response.status_code == status.HTTP_200_OK
        assert response.data['source'] == 'generator:gaussian-walk'

    def test_surface_missing(self, api_client, completed_run):
        response = api_client.get(reverse('analysis-run-surface', kwargs={'pk': completed_run.pk}))
        assert response.status_code == status.HTTP_404_NOT_FOUND

    def test_surface(self, api_client, small_run_payload):
        small_run_payload['emit_surface'] = True
        created = api_client.post(reverse('analysis-run-list'), small_run_payload, format='json')
        response = api_client.get(reverse('analysis-run-surface', kwargs={'pk': created.data['id']}))
        assert response.status_code == status.HTTP_200_OK
        assert response.data['count'] == 3 * 5
        assert set(response.data['rows'][0]) == {'q', 's', 'windows', 'h', 'bins', 'H'}
