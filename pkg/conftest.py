# Bootstrap Django the same way manage.py does so pytest can collect the suite.
import os

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "catci.config")
os.environ.setdefault("DJANGO_CONFIGURATION", "Local")

import configurations  # noqa: E402

configurations.setup()
