"""Configuration loading and logging setup shared by every module."""

import logging
import os
import sys
from functools import lru_cache

import yaml
from dotenv import load_dotenv

load_dotenv()

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(__file__), '../config/segalkit.yaml')

REQUIRED_SECTIONS = {
    'budgets': ['enumeration', 'pushout_steps', 'functors', 'mapset_nodes', 'corpus_tables'],
    'truncation': ['inner', 'outer', 'a5_inner', 'a5_outer', 'automorphism_cap'],
    'corpus': ['max_objects', 'max_arrows', 'max_linear', 'random_relcats', 'relcat_max_objects',
               'a6_max_arrows'],
    'oracle': ['random_spaces', 'max_cells_per_level', 'max_truncation'],
}

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def load_toolkit_config(config_path=None):
    """Load the toolkit configuration.

    The path comes from the argument, then the SEGALKIT_CONFIG environment
    variable, then config/segalkit.yaml next to the package.
    """
    config_path = config_path or os.environ.get('SEGALKIT_CONFIG', DEFAULT_CONFIG_PATH)

    if not os.path.exists(config_path):
        raise FileNotFoundError(f"Toolkit configuration file not found: {config_path}")

    with open(config_path, 'r', encoding='utf-8') as f:
        config = yaml.safe_load(f)

    validate_toolkit_config(config)

    seed_override = os.environ.get('SEGALKIT_SEED')
    if seed_override is not None:
        config['seed'] = int(seed_override)
    return config


def validate_toolkit_config(config):
    """Ensure every required section is present and every budget positive."""
    if not isinstance(config, dict):
        raise ValueError("Toolkit configuration must be a mapping")

    for section, keys in REQUIRED_SECTIONS.items():
        if section not in config:
            raise ValueError(f"Missing '{section}' section in configuration")
        for key in keys:
            if key not in config[section]:
                raise ValueError(f"Missing '{section}.{key}' in configuration")
            value = config[section][key]
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"'{section}.{key}' must be a non-negative integer, got {value!r}")

    for key, value in config['budgets'].items():
        if value <= 0:
            raise ValueError(f"Budget '{key}' must be positive, got {value}")

    if 'seed' not in config:
        raise ValueError("Missing 'seed' in configuration")


@lru_cache(maxsize=None)
def _default_config():
    return load_toolkit_config()


def get_setting(section, key):
    """Read one value from the default configuration."""
    return _default_config()[section][key]


def get_budget(name):
    return get_setting('budgets', name)


def get_seed():
    return _default_config()['seed']


def setup_logging(level=None):
    """Configure root logging once, honouring SEGALKIT_LOG_LEVEL."""
    level = level or os.environ.get('SEGALKIT_LOG_LEVEL', 'INFO')
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=[logging.StreamHandler(sys.stderr)],
    )
