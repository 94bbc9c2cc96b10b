# libs/__init__.py
"""frsweep library package."""

__version_info__ = ('0', '1', '0')
__version__ = '0.1.0'

# Re-export subpackages for convenient access
from libs import core, formats, linksim, utils
