"""
Utility functions and helpers.
"""

from .config_loader import load_config, get_config_value, DEFAULT_CONFIG
from .geometry_utils import normalize_projective, projective_distance, random_unit_sphere
from .log_setup import configure_logging

__all__ = [
    'load_config',
    'get_config_value',
    'DEFAULT_CONFIG',
    'normalize_projective',
    'projective_distance',
    'random_unit_sphere',
    'configure_logging',
]
