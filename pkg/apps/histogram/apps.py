from django.apps import AppConfig


class HistogramConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "apps.histogram"
    verbose_name = "Histogram"
