from django.apps import AppConfig


class FluctuationsConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "apps.fluctuations"
    verbose_name = "Fluctuations"
