from django.apps import AppConfig


class CITestConfig(AppConfig):
    name = "citest"
