"""
Base configuration data. Environment-specific stuff should go in local or production.py
"""

import os

from configurations import Configuration

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

ENGINE_APPS = (
    "core",
    "tabulate",
    "citest",
    "loglinear",
    "datasets",
    "bench",
)


def get_env_setting(name: str, default: str) -> str:
    """Engine settings can be overridden by CATCI_-prefixed environment variables"""
    return os.getenv(f"CATCI_{name}", default)


def env_flag(name: str, default: str = "no") -> bool:
    value = os.getenv(name, default).strip().casefold()
    return value in {"1", "y", "yes", "true", "on"}


def get_logging_config(level: str, formatter: str = "simple") -> dict:
    """Build the LOGGING dict with one console-bound logger per engine app"""
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "verbose": {
                "format": "%(levelname)s %(asctime)s %(module)s "
                "%(process)d %(thread)d %(message)s"
            },
            "simple": {"format": "%(levelname)s %(name)s %(message)s"},
        },
        "handlers": {
            "console": {
                "level": "DEBUG",
                "class": "logging.StreamHandler",
                "formatter": formatter,
            },
        },
        "loggers": {
            "django": {
                "handlers": ["console"],
                "level": "WARNING",
                "propagate": True,
            },
            **{
                app: {
                    "handlers": ["console"],
                    "level": level,
                    "propagate": False,
                }
                for app in ENGINE_APPS
            },
        },
    }


class Common(Configuration):  # pylint: disable=no-init
    """Base configuration data"""

    INSTALLED_APPS = (
        # Third party apps
        "rest_framework",
        # Your apps
        *ENGINE_APPS,
    )

    SECRET_KEY = os.getenv("DJANGO_SECRET_KEY")

    # the engine keeps no persistent state
    DATABASES = {}

    # General
    TIME_ZONE = "UTC"
    LANGUAGE_CODE = "en-us"
    USE_I18N = False
    USE_TZ = True

    # Set DEBUG to False as a default for safety
    # https://docs.djangoproject.com/en/dev/ref/settings/#debug
    DEBUG = env_flag("DJANGO_DEBUG")

    # Engine
    # tables with more cells than this are stored sparse
    DENSE_TABLE_THRESHOLD = int(get_env_setting("DENSE_TABLE_THRESHOLD", str(2**24)))
    IPF_TOLERANCE = float(get_env_setting("IPF_TOLERANCE", "1e-8"))
    IPF_MAX_ITERATIONS = int(get_env_setting("IPF_MAX_ITERATIONS", "50"))
    BATCH_WORKERS = int(get_env_setting("BATCH_WORKERS", "1"))
    BENCH_REPETITIONS = int(get_env_setting("BENCH_REPETITIONS", "50"))
    DEFAULT_DELIMITER = get_env_setting("DEFAULT_DELIMITER", ",")

    # Logging
    LOGGING = get_logging_config(get_env_setting("LOG_LEVEL", "WARNING").upper())

    # Django Rest Framework
    REST_FRAMEWORK = {
        "DEFAULT_RENDERER_CLASSES": ("rest_framework.renderers.JSONRenderer",),
        "DEFAULT_AUTHENTICATION_CLASSES": (),
        "DEFAULT_PERMISSION_CLASSES": (),
        "UNAUTHENTICATED_USER": None,
    }

    # Auto field (new in Django 3.2)
    DEFAULT_AUTO_FIELD = "django.db.models.AutoField"

    # Celery info
    CELERY_BROKER_URL = os.getenv("REDIS_URL", "redis://redis:6379/")
    CELERY_RESULT_BACKEND = CELERY_BROKER_URL
    CELERY_IMPORTS = ("citest.tasks",)
