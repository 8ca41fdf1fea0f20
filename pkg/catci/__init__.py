# importing the Celery app at startup binds citest.tasks' shared_task to it
from .celery import app as celery_app  # noqa

__all__ = ("celery_app",)
