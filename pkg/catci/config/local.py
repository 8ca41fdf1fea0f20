import os

from .common import Common


class Local(Common):
    DEBUG = True
    SECRET_KEY = os.getenv("DJANGO_SECRET_KEY", "local")

    # run tasks in-process; no broker needed on a workstation
    CELERY_TASK_ALWAYS_EAGER = True
    CELERY_TASK_EAGER_PROPAGATES = True
    CELERY_BROKER_URL = "memory://"
    CELERY_RESULT_BACKEND = "cache+memory://"
