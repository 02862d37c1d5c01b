"""
Django settings for the MF-DEA project.
"""
import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('SECRET_KEY', 'mfdea-insecure-development-key')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = os.environ.get('DEBUG', 'False').lower() == 'true'

# Allowed hosts
ALLOWED_HOSTS = os.environ.get('ALLOWED_HOSTS', 'localhost,127.0.0.1,testserver').split(',')

# Application definition
INSTALLED_APPS = [
    # Django apps
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',

    # Third party apps
    'rest_framework',
    'django_filters',
    'drf_yasg',

    # Local apps
    'apps.core.apps.CoreConfig',
    'apps.fluctuations.apps.FluctuationsConfig',
    'apps.histogram.apps.HistogramConfig',
    'apps.spectrum.apps.SpectrumConfig',
    'apps.levy.apps.LevyConfig',
    'apps.analysis.apps.AnalysisConfig',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'whitenoise.middleware.WhiteNoiseMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'core.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.debug',
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'core.wsgi.application'

# Database (SQLite unless DB_ENGINE points elsewhere)
DB_ENGINE = os.environ.get('DB_ENGINE', 'django.db.backends.sqlite3')

if DB_ENGINE.endswith('sqlite3'):
    DATABASES = {
        'default': {
            'ENGINE': DB_ENGINE,
            'NAME': os.environ.get('DB_NAME', str(BASE_DIR / 'mfdea.sqlite3')),
        }
    }
else:
    DATABASES = {
        'default': {
            'ENGINE': DB_ENGINE,
            'NAME': os.environ.get('DB_NAME', 'mfdea_db'),
            'USER': os.environ.get('DB_USER', 'postgres'),
            'PASSWORD': os.environ.get('DB_PASSWORD', 'postgres'),
            'HOST': os.environ.get('DB_HOST', 'localhost'),
            'PORT': os.environ.get('DB_PORT', '5432'),
            'OPTIONS': {
                'connect_timeout': 20,
            },
        }
    }

# Internationalization
LANGUAGE_CODE = 'en'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

# Static files (admin and swagger assets)
STATIC_URL = '/static/'
STATIC_ROOT = BASE_DIR / 'staticfiles'

# Default primary key field type
DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# REST Framework configuration
REST_FRAMEWORK = {
    'DEFAULT_PERMISSION_CLASSES': [
        os.environ.get('API_PERMISSION_CLASS', 'rest_framework.permissions.AllowAny'),
    ],
    'DEFAULT_PAGINATION_CLASS': 'apps.core.pagination.StandardResultsSetPagination',
    'PAGE_SIZE': 20,
    'DEFAULT_FILTER_BACKENDS': [
        'django_filters.rest_framework.DjangoFilterBackend',
        'rest_framework.filters.OrderingFilter',
    ],
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'DEFAULT_PARSER_CLASSES': [
        'rest_framework.parsers.JSONParser',
    ],
    'EXCEPTION_HANDLER': 'apps.core.exceptions.custom_exception_handler',
}


def _env_float(name, default):
    return float(os.environ.get(f'MFDEA_{name}', default))


def _env_int(name, default):
    return int(os.environ.get(f'MFDEA_{name}', default))


# Numerical defaults for the MF-DEA pipeline
MULTIFRACTAL = {
    # Shortest series accepted for spectrum estimation
    'MIN_SERIES_LENGTH': _env_int('MIN_SERIES_LENGTH', 128),
    # rho_q falls back to 1 for q <= 1/2 + margin
    'RHO_CLAMP_MARGIN': _env_float('RHO_CLAMP_MARGIN', 0.05),
    'SHANNON_TOLERANCE': _env_float('SHANNON_TOLERANCE', 1e-9),
    'PROBABILITY_TOLERANCE': _env_float('PROBABILITY_TOLERANCE', 1e-12),
    'CI_LEVEL': _env_float('CI_LEVEL', 0.99),
    'DEFAULT_Q_MIN': _env_float('DEFAULT_Q_MIN', 0.0),
    'DEFAULT_Q_MAX': _env_float('DEFAULT_Q_MAX', 10.0),
    'DEFAULT_Q_STEP': _env_float('DEFAULT_Q_STEP', 0.1),
    'MIN_REGRESSION_SCALES': _env_int('MIN_REGRESSION_SCALES', 3),
    # Stable-law quadrature
    'QUAD_REL_TOL': _env_float('QUAD_REL_TOL', 1e-8),
    'QUAD_ABS_TOL': _env_float('QUAD_ABS_TOL', 1e-13),
    'QUAD_LIMIT': _env_int('QUAD_LIMIT', 1000),
    'CHAR_CUTOFF': _env_float('CHAR_CUTOFF', 1e-12),
    # q-mu stationarity solver
    'SOLVER_Q_MAX': _env_float('SOLVER_Q_MAX', 1000.0),
    'SOLVER_MU_STEP': _env_float('SOLVER_MU_STEP', 1e-4),
    'SOLVER_TAIL_TOL': _env_float('SOLVER_TAIL_TOL', 1e-14),
    # Per-q evaluation threads (1 = serial)
    'WORKERS': _env_int('WORKERS', 1),
}

# Logging
LOG_LEVEL = os.environ.get('MFDEA_LOG_LEVEL', 'INFO').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'apps': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
        'django': {
            'handlers': ['console'],
            'level': os.environ.get('DJANGO_LOG_LEVEL', 'WARNING'),
        },
    },
}

# Swagger
SWAGGER_SETTINGS = {
    'USE_SESSION_AUTH': False,
}

# Security settings
X_FRAME_OPTIONS = 'DENY'
SECURE_CONTENT_TYPE_NOSNIFF = True

# Production security settings (enabled when DEBUG=False)
if not DEBUG and os.environ.get('SECURE_SSL_REDIRECT', 'False').lower() == 'true':
    SECURE_SSL_REDIRECT = True
    SECURE_PROXY_SSL_HEADER = ('HTTP_X_FORWARDED_PROTO', 'https')
    SECURE_HSTS_SECONDS = 31536000  # 1 year
    SESSION_COOKIE_SECURE = True
    CSRF_COOKIE_SECURE = True
