from django.apps import AppConfig


class OdeConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "ode"
