import pytest
from django.urls import reverse

from apps.simulations.models import StudyRun

from .factories import StudyRunFactory

pytestmark = pytest.mark.django_db


def test_queue_study_runs_inline(api_client):
    payload = {'study': 'ucurve', 'N': 2, 'n': 150, 'k': 10, 'seed': 3}
    response = api_client.post(reverse('study-run-list'), payload, format='json')
    assert response.status_code == 202
    assert response.data['status'] == StudyRun.Status.COMPLETED
    assert response.data['config']['k'] == 10
    assert response.data['config']['m'] == [2]

    run = StudyRun.objects.get(id=response.data['id'])
    assert run.failure_count == 0
    assert run.processing_time is not None
    assert len(run.summary['groups']) == 4


def test_invalid_orders_are_rejected(api_client):
    response = api_client.post(reverse('study-run-list'), {'study': 'ucurve', 'd': 2, 'm': [2]}, format='json')
    assert response.status_code == 400
    assert 'penalty orders' in response.data['error']
    assert not StudyRun.objects.exists()


def test_unknown_study(api_client):
    response = api_client.post(reverse('study-run-list'), {'study': 'sine'}, format='json')
    assert response.status_code == 400
    assert 'study' in response.data


def test_list_filters(api_client):
    StudyRunFactory(completed=True)
    StudyRunFactory(study=StudyRun.Study.RANDOM, failed=True)
    StudyRunFactory(study=StudyRun.Study.RANDOM)

    response = api_client.get(reverse('study-run-list'), {'study': 'random'})
    assert response.data['count'] == 2

    response = api_client.get(reverse('study-run-list'), {'status': 'failed'})
    assert response.data['count'] == 1
    assert response.data['results'][0]['status_display'] == 'Failed'


def test_detail(api_client):
    run = StudyRunFactory(completed=True, seed=12)
    response = api_client.get(reverse('study-run-detail', kwargs={'id': run.id}))
    assert response.status_code == 200
    assert response.data['config']['seed'] == 12
    assert response.data['study_display'] == 'U-shaped curve'
