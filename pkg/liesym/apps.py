from django.apps import AppConfig


class LiesymConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "liesym"
