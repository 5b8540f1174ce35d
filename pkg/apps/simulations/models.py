from django.db import models
import uuid


class StudyRun(models.Model):
    """
    A simulation study queued through the API and executed by a Celery worker
    """
    class Status(models.TextChoices):
        PENDING = 'pending', 'Pending'
        PROCESSING = 'processing', 'Processing'
        COMPLETED = 'completed', 'Completed'
        FAILED = 'failed', 'Failed'

    class Study(models.TextChoices):
        UCURVE = 'ucurve', 'U-shaped curve'
        MIXTURE1 = 'mixture1', 'Normal mixture, scheme 1'
        MIXTURE2 = 'mixture2', 'Normal mixture, scheme 2'
        RANDOM = 'random', 'Random spline curves'

    id = models.UUIDField(primary_key=True, default=uuid.uuid4, editable=False)
    study = models.CharField(max_length=20, choices=Study.choices)
    status = models.CharField(max_length=20, choices=Status.choices, default=Status.PENDING)
    config = models.JSONField(default=dict, blank=True)

    # Outcome
    summary = models.JSONField(default=dict, blank=True)
    failure_count = models.PositiveIntegerField(default=0)
    error_message = models.TextField(blank=True)

    # Processing
    started_at = models.DateTimeField(null=True, blank=True)
    completed_at = models.DateTimeField(null=True, blank=True)
    processing_time = models.FloatField(null=True, blank=True, help_text="Time in seconds")

    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        db_table = 'study_runs'
        ordering = ['-created_at']

    def __str__(self):
        return f"{self.get_study_display()} - {self.get_status_display()}"
