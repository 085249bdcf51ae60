import os
import copy
import logging
import multiprocessing

import yaml

from . import exceptions

logger = logging.getLogger(__name__)


DEFAULT_SETTINGS = {
    'max_states': 50_000_000,
    'oracle_budget': 100_000_000,
    'dot_node_cap': 2000,
    'max_full_base': 5,
    'max_limited_letters': 3,
    'max_enumeration_size': 1000,
    'cache_dir': None,
    'progress_interval': 10000,
}

_INT_KEYS = [k for k, v in DEFAULT_SETTINGS.items() if isinstance(v, int)]


def get_parallelism():
    return int(os.getenv('N_THREADS', multiprocessing.cpu_count()))


def get_cache_dir(settings=None):
    """Return the automaton cache directory, or None when caching is off.

    ``CRYPTDFA_CACHE`` takes precedence over the ``cache_dir`` setting.
    """
    path = os.getenv('CRYPTDFA_CACHE')
    if not path and settings is not None:
        path = settings.get('cache_dir')
    return os.path.expanduser(path) if path else None


def load_settings(fname=None):
    """Return the default settings overlaid with the YAML file ``fname``.

    Raises:
        ConfigurationMalformedError: if the file is not a mapping, names an
            unknown key, or gives a non-integer value for a numeric key.
    """
    settings = copy.deepcopy(DEFAULT_SETTINGS)

    if fname is None:
        return settings

    with open(fname, 'r') as f:
        config = yaml.safe_load(f)

    if config is None:
        return settings

    if not isinstance(config, dict):
        raise exceptions.ConfigurationMalformedError(
            f"Settings file '{fname}' must hold a mapping, got "
            f"{type(config).__name__}.")

    for key, val in config.items():
        if key not in DEFAULT_SETTINGS:
            raise exceptions.ConfigurationMalformedError(
                f"Unknown setting '{key}' in '{fname}' (allowed settings are "
                f"{sorted(DEFAULT_SETTINGS)}).", key=key)

        if key in _INT_KEYS and (isinstance(val, bool) or not isinstance(val, int)):
            raise exceptions.ConfigurationMalformedError(
                f"Setting '{key}' must be an integer, got {val!r}.", key=key)
        if key in _INT_KEYS and val < 1:
            raise exceptions.ConfigurationMalformedError(
                f"Setting '{key}' must be positive, got {val}.", key=key)
        if key == 'cache_dir' and val is not None and not isinstance(val, str):
            raise exceptions.ConfigurationMalformedError(
                f"Setting 'cache_dir' must be a path, got {val!r}.", key=key)

        settings[key] = val

    logger.debug("Loaded settings from %s: %s", fname, settings)

    return settings
