from django.apps import AppConfig


class SpecialConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "special"
