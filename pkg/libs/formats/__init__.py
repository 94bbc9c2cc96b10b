# libs/formats/__init__.py
"""CSV artifact writers."""

from libs.formats.csv_io import (write_plan, write_sfr, write_map, write_evm,
                                 write_summary, write_spectrum, write_pilot_track,
                                 write_budget_gains, read_table)

__all__ = [
    'write_plan', 'write_sfr', 'write_map', 'write_evm', 'write_summary',
    'write_spectrum', 'write_pilot_track', 'write_budget_gains', 'read_table',
]
