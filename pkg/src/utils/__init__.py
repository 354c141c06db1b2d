"""Utility functions for configuration, I/O, errors and logging."""

from .io import read_config, read_json, write_csv, write_json
from .config import DEFAULT_NUMERICS, NumericsConfig, load_numerics_config
from .errors import ConvergenceWarning, DomainError, FactorizationError, UnsupportedError
from .logs import kv, setup_logging

__all__ = [
    'read_config',
    'read_json',
    'write_csv',
    'write_json',
    'DEFAULT_NUMERICS',
    'NumericsConfig',
    'load_numerics_config',
    'ConvergenceWarning',
    'DomainError',
    'FactorizationError',
    'UnsupportedError',
    'kv',
    'setup_logging',
]
