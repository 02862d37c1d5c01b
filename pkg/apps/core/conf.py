"""
Access to the MULTIFRACTAL settings block.
"""
from django.conf import settings

DEFAULTS = {
    'MIN_SERIES_LENGTH': 128,
    'RHO_CLAMP_MARGIN': 0.05,
    'SHANNON_TOLERANCE': 1e-9,
    'PROBABILITY_TOLERANCE': 1e-12,
    'CI_LEVEL': 0.99,
    'DEFAULT_Q_MIN': 0.0,
    'DEFAULT_Q_MAX': 10.0,
    'DEFAULT_Q_STEP': 0.1,
    'MIN_REGRESSION_SCALES': 3,
    'QUAD_REL_TOL': 1e-8,
    'QUAD_ABS_TOL': 1e-13,
    'QUAD_LIMIT': 1000,
    'CHAR_CUTOFF': 1e-12,
    'SOLVER_Q_MAX': 1000.0,
    'SOLVER_MU_STEP': 1e-4,
    'SOLVER_TAIL_TOL': 1e-14,
    'WORKERS': 1,
}


def mfdea_setting(name):
    """
    Return a numerical tunable, falling back to the built-in default.
    """
    if name not in DEFAULTS:
        raise KeyError(f"Unknown MULTIFRACTAL setting '{name}'")
    configured = getattr(settings, 'MULTIFRACTAL', {})
    return configured.get(name, DEFAULTS[name])
