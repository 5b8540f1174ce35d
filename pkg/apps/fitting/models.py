from django.db import models
import uuid


class FitRun(models.Model):
    """
    Audit record of a curve fit requested through the API
    """
    class Status(models.TextChoices):
        COMPLETED = 'completed', 'Completed'
        FAILED = 'failed', 'Failed'

    class Flavor(models.TextChoices):
        DIFFERENCE_STANDARD = 'difference-standard', 'Standard difference'
        DIFFERENCE_GENERAL = 'difference-general', 'General difference'
        DERIVATIVE = 'derivative', 'Derivative'

    id = models.UUIDField(primary_key=True, default=uuid.uuid4, editable=False)
    status = models.CharField(max_length=20, choices=Status.choices, default=Status.COMPLETED)
    flavor = models.CharField(max_length=30, choices=Flavor.choices)
    options = models.JSONField(default=dict, blank=True)

    # Problem size
    n = models.PositiveIntegerField(default=0)
    p = models.PositiveIntegerField(null=True, blank=True)

    # Fit summary
    selected_lambda = models.FloatField(null=True, blank=True)
    edf = models.FloatField(null=True, blank=True)
    gcv = models.FloatField(null=True, blank=True)
    rss = models.FloatField(null=True, blank=True)
    flat_gcv = models.BooleanField(default=False)

    error_message = models.TextField(blank=True)
    processing_time = models.FloatField(null=True, blank=True, help_text="Time in seconds")

    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        db_table = 'fit_runs'
        ordering = ['-created_at']

    def __str__(self):
        return f"{self.get_flavor_display()} fit (n={self.n}) - {self.get_status_display()}"
