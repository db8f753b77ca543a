import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "diracni.settings")
django.setup()
