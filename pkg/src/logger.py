import logging
import os
import sys

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

VERBOSITY_ENV = 'ALARM_MINER_VERBOSITY'
_LEVELS = {'DEBUG', 'INFO', 'WARNING', 'ERROR'}


def setup_logging(verbose=False):
    """
    Configure console logging for the miner

    Log records go to stderr as "[Tag] message" so report output stays byte-stable.

    Args:
        verbose (bool): Force DEBUG regardless of the environment

    Returns:
        int: The effective log level
    """
    level_name = os.getenv(VERBOSITY_ENV, 'INFO').strip().upper()
    if level_name not in _LEVELS:
        level_name = 'INFO'
    level = logging.DEBUG if verbose else getattr(logging, level_name)

    root = logging.getLogger('alarm_miner')
    root.setLevel(level)
    # rebind to the current stderr on every call
    for old in list(root.handlers):
        root.removeHandler(old)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter('[%(tag)s] %(message)s'))
    handler.addFilter(_TagFilter())
    root.addHandler(handler)
    return level


def get_logger(tag):
    """Return the module logger printed with the given bracketed tag"""
    return logging.getLogger(f'alarm_miner.{tag}')


class _TagFilter(logging.Filter):
    def filter(self, record):
        record.tag = record.name.rsplit('.', 1)[-1]
        return True
