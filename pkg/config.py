#!/usr/bin/env python3
"""
Configuration for the unidist decision engine
Defaults below are overridden by config/engine.yaml, then by UNIDIST_* environment variables
"""
import logging
import os
from typing import Dict, List, Optional

from dotenv import load_dotenv

load_dotenv('.env')

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'config', 'engine.yaml')

SQINT_RULES = ('parity', 'conservative')

# Search and decision settings
ENGINE_CONFIG = {
    'sign_bfs_cap': 16,            # Longest sign tuple explored exhaustively
    'weyl_max_rank': 8,            # Largest n for Weyl group searches
    'max_support': 24,             # Orbit engine cap in support points
    'max_blocks': 8,               # Orbit engine cap on number of blocks
    'sqint_dist_rule': 'parity',   # parity | conservative (Unknown for length > 1)
}

# Logging Settings
LOGGING_CONFIG = {
    'log_level': 'WARNING',        # DEBUG, INFO, WARNING, ERROR
    'log_format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
}

# Oracle sweep defaults
ORACLE_CONFIG = {
    'signgraph_max': 12,           # Longest tuple in the sign graph sweep
    'weyl_max': 4,                 # Largest rank in the Weyl sweep
    'orbits_max': 5,               # Most flattened factors in the orbit sweep
    'nested_max': 14,              # Support cap for the nested-segment sweep
    'replay_max': 12,              # Support cap for the discrete series replay
    'mw_samples': 500,             # Random multisegments in the MW sweep
    'ladder_segments': 6,          # Most segments in the ladder grids
    'mw_ladder_bound': 6,          # Largest |endpoint| in the MW ladder grid
    'bc_ladder_bound': 4,          # Largest |endpoint| in the base change ladder sweep
    'standard_samples': 200,       # Random generic inputs in the standard module sweep
    'seed': 20240611,              # Seed for randomized sweeps
}

_DEFAULTS = {
    'engine': dict(ENGINE_CONFIG),
    'logging': dict(LOGGING_CONFIG),
    'oracle': dict(ORACLE_CONFIG),
}

# Environment variable -> (section, key, type)
ENV_OVERRIDES = {
    'UNIDIST_MAX_SUPPORT': ('engine', 'max_support', int),
    'UNIDIST_SIGN_CAP': ('engine', 'sign_bfs_cap', int),
    'UNIDIST_SQINT_RULE': ('engine', 'sqint_dist_rule', str),
    'UNIDIST_LOG_LEVEL': ('logging', 'log_level', str),
}


def _load_yaml(path: str) -> Dict:
    """Load overrides from a YAML file, empty on any failure"""
    if not os.path.exists(path):
        return {}
    try:
        import yaml
        with open(path, 'r') as f:
            return yaml.safe_load(f) or {}
    except Exception as e:
        logger.error(f"Failed to load config {path}: {e}, using defaults")
        return {}


def load_config(path: Optional[str] = None) -> Dict[str, Dict]:
    """Build the layered configuration: defaults, YAML file, environment"""
    merged = {section: dict(values) for section, values in _DEFAULTS.items()}

    path = path or os.getenv('UNIDIST_CONFIG') or DEFAULT_CONFIG_PATH
    overrides = _load_yaml(path)
    for section, values in overrides.items():
        if section in merged and isinstance(values, dict):
            merged[section].update(values)

    for var, (section, key, cast) in ENV_OVERRIDES.items():
        raw = os.getenv(var)
        if raw is None or raw == '':
            continue
        try:
            merged[section][key] = cast(raw)
        except ValueError:
            logger.error(f"Ignoring {var}={raw!r}: expected {cast.__name__}")

    return merged


def reload_config(path: Optional[str] = None) -> Dict[str, Dict]:
    """Re-read every layer and update the module-level dicts in place"""
    merged = load_config(path)
    ENGINE_CONFIG.clear()
    ENGINE_CONFIG.update(merged['engine'])
    LOGGING_CONFIG.clear()
    LOGGING_CONFIG.update(merged['logging'])
    ORACLE_CONFIG.clear()
    ORACLE_CONFIG.update(merged['oracle'])
    return CONFIG


def validate_config() -> List[str]:
    """Validate configuration settings"""
    errors = []

    for key in ('sign_bfs_cap', 'weyl_max_rank', 'max_support', 'max_blocks'):
        value = ENGINE_CONFIG.get(key)
        if not isinstance(value, int) or value < 1:
            errors.append(f"{key} must be a positive integer (got {value!r})")

    if ENGINE_CONFIG.get('sqint_dist_rule') not in SQINT_RULES:
        errors.append(f"sqint_dist_rule must be one of {', '.join(SQINT_RULES)}")

    if ENGINE_CONFIG.get('sign_bfs_cap', 0) > 24:
        errors.append("sign_bfs_cap > 24 makes exhaustive search impractical")

    if ENGINE_CONFIG.get('weyl_max_rank', 0) > 8:
        errors.append("weyl_max_rank > 8 is not supported")

    if LOGGING_CONFIG.get('log_level') not in ('DEBUG', 'INFO', 'WARNING', 'ERROR'):
        errors.append("log_level must be DEBUG, INFO, WARNING or ERROR")

    return errors


def setup_logging() -> None:
    """Configure root logging from LOGGING_CONFIG (stderr)"""
    logging.basicConfig(
        level=getattr(logging, LOGGING_CONFIG.get('log_level', 'WARNING'), logging.WARNING),
        format=LOGGING_CONFIG['log_format'],
    )


# Export main config for easy import
CONFIG = {
    'engine': ENGINE_CONFIG,
    'logging': LOGGING_CONFIG,
    'oracle': ORACLE_CONFIG,
}

reload_config()

if __name__ == "__main__":
    # Validate configuration when run directly
    errors = validate_config()
    if errors:
        print("Configuration Errors:")
        for error in errors:
            print(f"  - {error}")
    else:
        print("Configuration is valid!")

    # Display the merged configuration
    for section, values in CONFIG.items():
        print(f"\n[{section}]")
        for key, value in values.items():
            print(f"  {key}: {value}")
