# libs/utils/__init__.py
"""Constants, errors and interval helpers."""

from libs.utils.constants import SPEED_OF_LIGHT, DEFAULT_ENCODING, RESOLVED_CONFIG_NAME
from libs.utils.errors import ContractError, ConfigError, DemodulationError
from libs.utils.intervals import FrequencyInterval, merge_intervals, intersect_intervals, intersect_all
