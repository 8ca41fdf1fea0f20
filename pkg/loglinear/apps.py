from django.apps import AppConfig


class LoglinearConfig(AppConfig):
    name = "loglinear"
