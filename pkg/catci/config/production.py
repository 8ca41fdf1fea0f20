import os

from .common import Common, get_env_setting, get_logging_config


class Production(Common):
    SECRET_KEY = os.getenv("DJANGO_SECRET_KEY")

    LOGGING = get_logging_config(
        get_env_setting("LOG_LEVEL", "INFO").upper(),
        formatter="verbose",
    )
