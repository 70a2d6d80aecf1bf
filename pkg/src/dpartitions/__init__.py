# stdlib
import sys

# dpartitions relative
from . import logger  # noqa: F401
from .version import __version__  # noqa: F401

logger.add(sink=sys.stderr, level="ERROR")
