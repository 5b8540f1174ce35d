from django.apps import AppConfig


class SplinesConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "apps.splines"
    verbose_name = 'Splines'
