# libs/formats/csv_io.py
"""Fixed-schema CSV artifacts.

Column order is part of the format. Numbers use ``%.9g`` with a ``.``
decimal separator, missing values are empty and lines end in ``\\n``, so
identical inputs give byte-identical files.
"""

import logging
from typing import Dict, Iterable, Optional

import pandas as pd

from libs.utils.constants import DEFAULT_ENCODING

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.9g'

PLAN_COLUMNS = ['reach_m', 'f_opt_hz', 'sfr_lo_hz', 'sfr_hi_hz',
                'common_lo_hz', 'common_hi_hz', 'kappa_hz', 'worst_overlap']
SFR_COLUMNS = ['reach_m', 'f_opt_hz', 'sfr_lo_hz', 'sfr_hi_hz']
MAP_COLUMNS = ['f_hz', 'pi_eff', 'overlap_prob']
REACH_MAP_COLUMNS = ['f_hz', 'reach_m', 'overlap_prob']
EVM_COLUMNS = ['subcarrier', 'evm_pct']
SUMMARY_COLUMNS = ['case', 'osrr_db', 'budget_db', 'evm_avg_pct',
                   'penalty_pct', 'lock_fraction']
SPECTRUM_COLUMNS = ['freq_hz', 'power_db']
PILOT_TRACK_COLUMNS = ['t_s', 'f_peak_hz']
BUDGET_GAIN_COLUMNS = ['limit', 'evm_limit_pct', 'budget_gain_db']


def write_frame(rows, columns, path):
    """Write ``rows`` (sequence of tuples or a column dict) under ``columns``."""
    if isinstance(rows, dict):
        frame = pd.DataFrame(rows, columns=columns)
    else:
        frame = pd.DataFrame(list(rows), columns=columns)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT,
                 lineterminator='\n', encoding=DEFAULT_ENCODING)
    logger.debug("wrote %d rows to %s", len(frame), path)
    return path


def _interval_near(intervals, f):
    """Interval holding ``f``, else the one whose midpoint is closest."""
    if not intervals:
        return None
    for iv in intervals:
        if iv.contains(f):
            return iv
    return min(intervals, key=lambda iv: abs(iv.midpoint - f))


def _bounds(interval):
    return (None, None) if interval is None else (interval.lo, interval.hi)


def write_plan(plan, path):
    """One row per reflection.

    The SFR columns hold the reflection's interval around kappa (around its
    optimal frequency when no kappa exists); the common columns hold the
    common interval kappa was taken from.
    """
    kappa = plan.chosen_frequency
    common = None
    if kappa is not None:
        common = _interval_near(plan.common_intervals, kappa)
    rows = []
    for fr in plan.per_fr:
        target = kappa if kappa is not None else fr.f_opt
        sfr = _interval_near(fr.sfr_intervals, target)
        rows.append((fr.reach, fr.f_opt, *_bounds(sfr), *_bounds(common),
                     kappa, plan.worst_overlap))
    return write_frame(rows, PLAN_COLUMNS, path)


def write_sfr(plan, path):
    """Every compatible interval of every reflection."""
    rows = [(fr.reach, fr.f_opt, iv.lo, iv.hi)
            for fr in plan.per_fr for iv in fr.sfr_intervals]
    return write_frame(rows, SFR_COLUMNS, path)


def write_map(overlap_map, path):
    """Long format, one row per (axis value, frequency)."""
    columns = MAP_COLUMNS if overlap_map.axis == 'pi' else REACH_MAP_COLUMNS
    rows = [(f, value, p)
            for value, row in zip(overlap_map.axis_values,
                                  overlap_map.probabilities)
            for f, p in zip(overlap_map.frequencies, row)]
    return write_frame(rows, columns, path)


def write_evm(result, path):
    rows = list(enumerate(result.evm_per_subcarrier))
    return write_frame(rows, EVM_COLUMNS, path)


def write_summary(results: Iterable, path):
    rows = [(r.case.value, r.osrr, r.loss_budget, r.evm_avg, r.evm_penalty,
             r.lock_fraction) for r in results]
    return write_frame(rows, SUMMARY_COLUMNS, path)


def write_spectrum(spectrum, path):
    return write_frame({'freq_hz': spectrum.freqs, 'power_db': spectrum.power_db},
                       SPECTRUM_COLUMNS, path)


def write_pilot_track(track, path):
    return write_frame({'t_s': track.t, 'f_peak_hz': track.f_peak},
                       PILOT_TRACK_COLUMNS, path)


def write_budget_gains(gains: Dict[str, Optional[float]],
                       limits: Dict[str, float], path):
    rows = [(name, limits[name], gains.get(name)) for name in limits]
    return write_frame(rows, BUDGET_GAIN_COLUMNS, path)


def read_table(path) -> pd.DataFrame:
    return pd.read_csv(path, encoding=DEFAULT_ENCODING)
