# libs/core/waveform.py
"""Periodic wavelength-sweep waveforms shared by transmitter and LO.

The optical frequency offset follows a rising ramp from 0 to ``delta_f`` over
``(1 - r)`` of the period and a linear falling ramp back to 0 over the
remaining ``r``. ``r = 0`` is the ideal sawtooth. Offsets are relative to the
unswept emission frequency; only differences ever matter.

Every function accepts a scalar time or a numpy array of times and answers in
kind.
"""

from dataclasses import dataclass, replace

import numpy as np

from libs.utils.errors import ContractError


@dataclass(frozen=True)
class SweepWaveform:
    """Sweep sequence parameters.

    Attributes:
        delta_f: Peak frequency deviation in Hz (the wavelength swing).
        sweep_freq: Repetition rate f = 1/T_per in Hz.
        ramp_fraction: Share of the period taken by the falling ramp, [0, 0.5).
        phase_offset: Start phase of the sequence as a fraction of a period.
    """
    delta_f: float
    sweep_freq: float
    ramp_fraction: float = 0.0
    phase_offset: float = 0.0

    def __post_init__(self):
        if not self.delta_f > 0:
            raise ContractError(f"delta_f must be > 0, got {self.delta_f}")
        if not self.sweep_freq > 0:
            raise ContractError(
                f"sweep_freq must be > 0, got {self.sweep_freq}")
        if not 0.0 <= self.ramp_fraction < 0.5:
            raise ContractError(
                f"ramp_fraction must lie in [0, 0.5), got {self.ramp_fraction}")
        if not 0.0 <= self.phase_offset < 1.0:
            raise ContractError(
                f"phase_offset must lie in [0, 1), got {self.phase_offset}")

    @property
    def period(self) -> float:
        return 1.0 / self.sweep_freq

    def with_frequency(self, sweep_freq):
        return replace(self, sweep_freq=sweep_freq)

    def shifted(self, phase_error):
        """Copy whose start phase is advanced by ``phase_error`` periods."""
        return replace(self, phase_offset=(self.phase_offset + phase_error) % 1.0)


def _output(values, scalar):
    return float(values) if scalar else values


def _ramp_value(w, p):
    """Frequency offset at period fraction(s) ``p`` in [0, 1)."""
    rise = 1.0 - w.ramp_fraction
    rising = w.delta_f * p / rise
    if w.ramp_fraction == 0.0:
        return rising
    falling = w.delta_f * (1.0 - p) / w.ramp_fraction
    return np.where(p < rise, rising, falling)


def _ramp_area(w, p):
    """Integral of the offset over [0, p) of one period, in Hz·period."""
    rise = 1.0 - w.ramp_fraction
    rising = 0.5 * w.delta_f * p * p / rise
    if w.ramp_fraction == 0.0:
        return rising
    q = p - rise
    falling = w.delta_f * (0.5 * rise + q - q * q / (2.0 * w.ramp_fraction))
    return np.where(p < rise, rising, falling)


def _phase_coordinate(w, t):
    """Continuous position in periods, including the start phase."""
    return np.asarray(t, dtype=float) * w.sweep_freq + w.phase_offset


def instantaneous_frequency(w: SweepWaveform, t):
    """Frequency offset in Hz at time(s) ``t`` (any real value)."""
    scalar = np.ndim(t) == 0
    u = _phase_coordinate(w, t)
    p = u - np.floor(u)
    return _output(_ramp_value(w, p), scalar)


def _cumulative_area(w, u):
    whole = np.floor(u)
    return whole * 0.5 * w.delta_f + _ramp_area(w, u - whole)


def phase_cycles(w: SweepWaveform, t):
    """Accumulated phase in cycles from t = 0 to ``t``; negative for t < 0."""
    scalar = np.ndim(t) == 0
    u = _phase_coordinate(w, t)
    cycles = (_cumulative_area(w, u)
              - _cumulative_area(w, np.asarray(w.phase_offset))) / w.sweep_freq
    return _output(cycles, scalar)


def accumulated_phase(w: SweepWaveform, t0, t1):
    """Integral of the frequency offset over [t0, t1], in cycles.

    Evaluated piecewise-analytically, so it is exact up to rounding for any
    interval length.

    Raises:
        ContractError: if any ``t1`` precedes its ``t0``.
    """
    if np.any(np.asarray(t1) < np.asarray(t0)):
        raise ContractError("accumulated_phase requires t1 >= t0")
    scalar = np.ndim(t0) == 0 and np.ndim(t1) == 0
    area = (_cumulative_area(w, _phase_coordinate(w, t1))
            - _cumulative_area(w, _phase_coordinate(w, t0)))
    return _output(area / w.sweep_freq, scalar)
