import os
from pathlib import Path

from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(BASE_DIR / '.env')


# Development settings; the project runs as a command-line tool, the admin is
# only for browsing stored run reports.

SECRET_KEY = os.getenv('DJANGO_SECRET_KEY', 'django-insecure-limitratio-local-only')

DEBUG = os.getenv('DJANGO_DEBUG', 'True') == 'True'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    'rest_framework',
    'unimodular',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'LimitRatio.urls'

WSGI_APPLICATION = 'LimitRatio.wsgi.application'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]


# Database
# SQLite unless a PostgreSQL database is configured in the environment.

if os.getenv('DATABASE_NAME'):
    DATABASES = {
        'default': {
            'ENGINE': 'django.db.backends.postgresql',
            'NAME': os.getenv('DATABASE_NAME'),
            'USER': os.getenv('DATABASE_USER', 'postgres'),
            'PASSWORD': os.getenv('DATABASE_PASSWORD', ''),
            'HOST': os.getenv('DATABASE_HOST', 'localhost'),
            'PORT': os.getenv('DATABASE_PORT', '5432'),
        }
    }
else:
    DATABASES = {
        'default': {
            'ENGINE': 'django.db.backends.sqlite3',
            'NAME': BASE_DIR / 'limitratio.sqlite3',
        }
    }


LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True

STATIC_URL = 'static/'

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Numerical defaults
# Every CLI tolerance flag falls back to these values.

UNIMODAL = {
    'ROOT_TOL': float(os.getenv('UNIMODAL_ROOT_TOL', '1e-12')),
    'MAX_ITER': int(os.getenv('UNIMODAL_MAX_ITER', '200')),
    'TAU': float(os.getenv('UNIMODAL_TAU', '1e-9')),
    'QUAD_POINTS': int(os.getenv('UNIMODAL_QUAD_POINTS', '4096')),
    'QUAD_TOL': float(os.getenv('UNIMODAL_QUAD_TOL', '1e-4')),
    'MAHLER_GRID': int(os.getenv('UNIMODAL_MAHLER_GRID', '512')),
    'CAP_R': float(os.getenv('UNIMODAL_CAP_R', '0.99999')),
    'CAP_N': int(os.getenv('UNIMODAL_CAP_N', '300')),
    'CAP_POINTS': int(os.getenv('UNIMODAL_CAP_POINTS', '16384')),
    'BISECT_TOL': float(os.getenv('UNIMODAL_BISECT_TOL', '1e-12')),
    'GRID_N': int(os.getenv('UNIMODAL_GRID_N', '256')),
    'DEGENERATE_FLOOR': float(os.getenv('UNIMODAL_DEGENERATE_FLOOR', '1e-12')),
    'TAU_EXACT': float(os.getenv('UNIMODAL_TAU_EXACT', '1e-10')),
    'DISC_BUDGET': float(os.getenv('UNIMODAL_DISC_BUDGET', '1e7')),
}

UNIMODAL_THREADS = int(os.getenv('UNIMODAL_THREADS', '4'))


# Logging

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'unimodular': {
            'handlers': ['console'],
            'level': os.getenv('UNIMODAL_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}
