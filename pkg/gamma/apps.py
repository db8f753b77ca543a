from django.apps import AppConfig


class GammaConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "gamma"
