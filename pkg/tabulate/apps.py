from django.apps import AppConfig


class TabulateConfig(AppConfig):
    name = "tabulate"
