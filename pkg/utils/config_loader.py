"""
Configuration loading utilities.
"""

import copy
import logging
import os
from pathlib import Path
from typing import Any, Optional

import yaml

logger = logging.getLogger(__name__)

SEED_ENV_VAR = 'PROJSPEC_SEED'

DEFAULT_CONFIG = {
    'numerics': {
        'seed': 42,
        'membership_tol': 1e-8,
    },
    'detpoly': {
        'oversampling': 2,
        'residual_tol': 1e-8,
        'max_monomials': 10000,
        'cluster_radius': 1e-6,
    },
    'spectrum': {
        'lines': 50,
        'method': 'pencil',
        'verify_tol': 1e-6,
        'grid_resolution': 101,
    },
    'arrangement': {
        'dedup_tol': 1e-8,
        'residual_tol': 1e-7,
        'factorization_points': 50,
        'factorization_tol': 1e-6,
    },
    'mcform': {
        'step_scale': 1e-5,
        'check_points': 5,
        'word_length': 3,
        'centrality_trials': 200,
        'central_tol': 1e-10,
        'closed_tol': 1e-6,
        'euler_tol': 1e-10,
        'derivative_tol': 1e-6,
    },
    'periods': {
        'initial_samples': 256,
        'max_samples': 65536,
        'tolerance': 1e-10,
        'admissibility_factor': 10.0,
        'nontrivial_threshold': 1e-4,
        'winding_tol': 1e-6,
        'agreement_tol': 1e-4,
    },
    'equiv': {
        'null_tol': 1e-8,
        'constancy_tol': 1e-8,
        'residual_tol': 1e-7,
    },
    'output': {
        'float_format': '%.17g',
        'dpi': 150,
    },
    'logging': {
        'level': 'INFO',
    },
}


def _deep_merge(base: dict, override: dict) -> dict:
    """Recursively merge override into a copy of base."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path: Optional[str] = 'config.yaml') -> dict:
    """
    Load configuration from YAML file merged over the built-in defaults.

    The environment variable PROJSPEC_SEED, when set, replaces numerics.seed.

    Args:
        config_path: Path to configuration file (None for defaults only)

    Returns:
        Configuration dictionary
    """
    user_config = {}
    if config_path is not None:
        config_file = Path(config_path)
        if config_file.exists():
            try:
                with open(config_file, 'r', encoding='utf-8') as f:
                    user_config = yaml.safe_load(f) or {}
            except (OSError, yaml.YAMLError) as e:
                logger.error(f"Error loading config {config_file}: {e}; using defaults")
                user_config = {}
        else:
            logger.debug(f"Config file {config_file} not found; using defaults")

    config = _deep_merge(DEFAULT_CONFIG, user_config)

    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        try:
            config['numerics']['seed'] = int(env_seed)
        except ValueError:
            logger.warning(f"Ignoring non-integer {SEED_ENV_VAR}={env_seed!r}")

    return config


def get_config_value(config: dict, key_path: str, default: Any = None) -> Any:
    """
    Get configuration value using dot-notation path.

    Args:
        config: Configuration dictionary
        key_path: Dot-separated path (e.g., 'periods.initial_samples')
        default: Default value if key not found

    Returns:
        Configuration value or default
    """
    value = config
    for key in key_path.split('.'):
        if isinstance(value, dict) and key in value:
            value = value[key]
        else:
            return default
    return value
