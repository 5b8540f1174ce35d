from celery import shared_task
from django.utils import timezone
import logging

from apps.splines.exceptions import SplineError

from .models import StudyRun
from .services.studies import build_study_config, run_study

logger = logging.getLogger(__name__)


@shared_task(bind=True)
def run_study_task(self, run_id: str):
    """
    Execute a queued study and store its summary on the run

    Celery's prefork workers cannot start child processes, so replicates run
    serially here whatever the stored worker count.
    """
    run = StudyRun.objects.get(id=run_id)
    run.status = StudyRun.Status.PROCESSING
    run.started_at = timezone.now()
    run.save(update_fields=['status', 'started_at', 'updated_at'])

    logger.info(f"Starting {run.study} study for run {run_id}")

    try:
        cfg = build_study_config(**{**run.config, 'study': run.study, 'workers': 1})
        result = run_study(cfg)
    except SplineError as e:
        logger.error(f"Study run {run_id} failed: {e}")
        _finish(run, StudyRun.Status.FAILED, error_message=str(e))
        return {'status': 'failed', 'error': str(e)}
    except Exception as e:
        logger.error(f"Unexpected error in study run {run_id}: {str(e)}")
        _finish(run, StudyRun.Status.FAILED, error_message=str(e))
        raise

    summary = result.summary()
    _finish(run, StudyRun.Status.COMPLETED, summary=summary, failure_count=summary['failures'])
    logger.info(f"Study run {run_id} completed in {run.processing_time:.1f}s with {summary['failures']} excluded fits")
    return {
        'status': 'completed',
        'failures': summary['failures'],
        'processing_time': run.processing_time,
    }


def _finish(run, status, **fields):
    run.status = status
    run.completed_at = timezone.now()
    run.processing_time = (run.completed_at - run.started_at).total_seconds()
    for name, value in fields.items():
        setattr(run, name, value)
    run.save()
