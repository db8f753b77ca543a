import logging
import os
from pathlib import Path

import sentry_sdk
from environs import Env
from marshmallow.validate import OneOf, Range
from sentry_sdk.integrations.django import DjangoIntegration

# Read .env file for environment variable
env = Env()
env.read_env()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Run environment
DIRACNI_ENVIRONMENT = env.str(
    "DIRACNI_ENVIRONMENT",
    default="development",
    validate=OneOf(choices=["development", "testing", "production"]),
    error="DIRACNI_ENVIRONMENT can only be one of {choices}",
)

DEBUG = DIRACNI_ENVIRONMENT != "production"

# No request handling happens; the key only satisfies django.setup()
SECRET_KEY = env.str("DJANGO_SECRET_KEY", default="diracni-offline-numerics-key")

ALLOWED_HOSTS = []

# Django apps
DJANGO_APPS = [
    "django.contrib.contenttypes",
]

# Internal apps
INTERNAL_APPS = [
    "gamma",
    "jets",
    "operators",
    "liesym",
    "special",
    "ode",
    "scenario",
    "report",
]

INSTALLED_APPS = DJANGO_APPS + INTERNAL_APPS

# Numerics never touch a database
DATABASES = {}

USE_TZ = True
TIME_ZONE = "UTC"

# Default tolerances
ALGEBRA_TOL = env.float("DIRACNI_ALGEBRA_TOL", default=1e-8, validate=Range(min=0))
RESIDUAL_TOL = env.float("DIRACNI_RESIDUAL_TOL", default=1e-6, validate=Range(min=0))
SPECTRUM_TOL = env.float("DIRACNI_SPECTRUM_TOL", default=1e-8, validate=Range(min=0))
BRIDGE_TOL = env.float("DIRACNI_BRIDGE_TOL", default=1e-6, validate=Range(min=0))
ODE_TOL = env.float("DIRACNI_ODE_TOL", default=1e-10, validate=Range(min=0))

# Sampling
GRID_SIZE = env.int("DIRACNI_GRID", default=16, validate=Range(min=2))
DEFAULT_SEED = env.int("DIRACNI_SEED", default=0, validate=Range(min=0))
SINGULAR_MARGIN = env.float(
    "DIRACNI_SINGULAR_MARGIN", default=0.05, validate=Range(min=0, max=0.5)
)

# Complex-q quadrature
QUADRATURE_CUTOFF = env.float(
    "DIRACNI_QUADRATURE_CUTOFF", default=8.0, validate=Range(min=1)
)
QUADRATURE_NODES = env.int("DIRACNI_QUADRATURE_NODES", default=200, validate=Range(min=16))

# Command output styling
NO_COLOR = "NO_COLOR" in os.environ

# Logging
LOG_LEVEL = env.str(
    "LOG_LEVEL",
    default="INFO",
    validate=OneOf(choices=["DEBUG", "INFO", "WARNING", "ERROR"]),
)

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "%(asctime)s %(levelname)s %(name)s: %(message)s",
        },
    },
    "root": {
        "level": LOG_LEVEL,
        "handlers": ["console"],
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "django": {
            "level": "WARNING",
            "handlers": ["console"],
            "propagate": False,
        }
    },
}

# Sentry
ENABLE_SENTRY = env.bool("ENABLE_SENTRY", default=False)
if ENABLE_SENTRY:
    sentry_sdk.init(
        dsn=env.url("SENTRY_DSN").geturl(),
        integrations=[DjangoIntegration()],
        traces_sample_rate=0.0,
        environment=DIRACNI_ENVIRONMENT,
    )
    logging.getLogger(__name__).debug("Sentry error reporting enabled")
