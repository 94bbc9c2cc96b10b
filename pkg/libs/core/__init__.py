# libs/core/__init__.py
"""Sweep waveforms, overlap analysis and sweep planning."""

from libs.core.waveform import SweepWaveform, instantaneous_frequency, accumulated_phase
from libs.core.overlap import (OverlapSpec, ReflectionPoint, round_trip_delay,
                               displacement, overlap_probability_analytic,
                               overlap_probability_oracle, optimal_sweep_frequency,
                               sweep_frequency_range)
from libs.core.planner import (OdnProfile, ScanGrid, SweepPlan, PlanStatus, OverlapMap,
                               plan_common_sweep, overlap_map, effective_upper_frequency)
from libs.core.settings import RunConfig, parse_config, dump_resolved

__all__ = [
    'SweepWaveform', 'instantaneous_frequency', 'accumulated_phase',
    'OverlapSpec', 'ReflectionPoint', 'round_trip_delay', 'displacement',
    'overlap_probability_analytic', 'overlap_probability_oracle',
    'optimal_sweep_frequency', 'sweep_frequency_range',
    'OdnProfile', 'ScanGrid', 'SweepPlan', 'PlanStatus', 'OverlapMap',
    'plan_common_sweep', 'overlap_map', 'effective_upper_frequency',
    'RunConfig', 'parse_config', 'dump_resolved',
]
