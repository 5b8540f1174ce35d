# Generated by Django 4.2.7 on 2026-10-18 09:12

from django.db import migrations, models
import uuid


class Migration(migrations.Migration):
    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="FitRun",
            fields=[
                (
                    "id",
                    models.UUIDField(
                        default=uuid.uuid4,
                        editable=False,
                        primary_key=True,
                        serialize=False,
                    ),
                ),
                (
                    "status",
                    models.CharField(
                        choices=[("completed", "Completed"), ("failed", "Failed")],
                        default="completed",
                        max_length=20,
                    ),
                ),
                (
                    "flavor",
                    models.CharField(
                        choices=[
                            ("difference-standard", "Standard difference"),
                            ("difference-general", "General difference"),
                            ("derivative", "Derivative"),
                        ],
                        max_length=30,
                    ),
                ),
                ("options", models.JSONField(blank=True, default=dict)),
                ("n", models.PositiveIntegerField(default=0)),
                ("p", models.PositiveIntegerField(blank=True, null=True)),
                ("selected_lambda", models.FloatField(blank=True, null=True)),
                ("edf", models.FloatField(blank=True, null=True)),
                ("gcv", models.FloatField(blank=True, null=True)),
                ("rss", models.FloatField(blank=True, null=True)),
                ("flat_gcv", models.BooleanField(default=False)),
                ("error_message", models.TextField(blank=True)),
                (
                    "processing_time",
                    models.FloatField(
                        blank=True, help_text="Time in seconds", null=True
                    ),
                ),
                ("created_at", models.DateTimeField(auto_now_add=True)),
                ("updated_at", models.DateTimeField(auto_now=True)),
            ],
            options={
                "db_table": "fit_runs",
                "ordering": ["-created_at"],
            },
        ),
    ]
