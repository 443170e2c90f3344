"""
WSGI entry point for browsing stored run reports in the admin.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'LimitRatio.settings')

application = get_wsgi_application()
