# libs/core/overlap.py
"""Spectral displacement between a swept signal and its reflected replica.

A Fresnel reflection at reach l returns the swept light after the round trip
``2 l n_g / c``. Signal and replica overlap whenever their frequency offsets
differ by less than the effective band edge ``f_eff``; the share of the
sweep period spent overlapping is the overlap probability. The reflection's
magnitude never enters: any reflection counts.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from libs.core.waveform import SweepWaveform, instantaneous_frequency
from libs.utils.constants import SPEED_OF_LIGHT
from libs.utils.errors import ContractError
from libs.utils.intervals import FrequencyInterval, merge_intervals

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_SAMPLES = 65536
MIN_ORACLE_SAMPLES = 1024
DEFAULT_POINTS_PER_DECADE = 2000
SATURATION_PI = 0.5


@dataclass(frozen=True)
class ReflectionPoint:
    """One discrete reflection: reach to the swept source and reflectance."""
    reach: float
    reflectance: float = -14.7  # dB, unterminated PC connector

    def __post_init__(self):
        if not self.reach > 0:
            raise ContractError(f"reach must be > 0 m, got {self.reach}")
        if self.reflectance > 0:
            raise ContractError(
                f"reflectance must be <= 0 dB, got {self.reflectance}")


@dataclass(frozen=True)
class OverlapSpec:
    """Band edges that decide when crosstalk lands on the signal.

    Attributes:
        f_upper: Uppermost signal frequency f_u in Hz.
        delta_f: Sweep deviation in Hz.
        lock_guard: Injection-locking guard band added to f_u, Hz.
        crosstalk_bandwidth: Crosstalk spectral width; None means f_u.
    """
    f_upper: float
    delta_f: float
    lock_guard: float = 0.0
    crosstalk_bandwidth: Optional[float] = None

    def __post_init__(self):
        if self.f_upper < 0:
            raise ContractError(f"f_upper must be >= 0, got {self.f_upper}")
        if self.lock_guard < 0:
            raise ContractError(
                f"lock_guard must be >= 0, got {self.lock_guard}")
        if not self.delta_f > 0:
            raise ContractError(f"delta_f must be > 0, got {self.delta_f}")
        if self.crosstalk_bandwidth is not None and self.crosstalk_bandwidth < 0:
            raise ContractError("crosstalk_bandwidth must be >= 0")

    @property
    def f_effective(self) -> float:
        xbw = self.f_upper if self.crosstalk_bandwidth is None \
            else self.crosstalk_bandwidth
        return 0.5 * (self.f_upper + xbw) + self.lock_guard

    @property
    def pi(self) -> float:
        """Effective ratio of the band edge to the sweep deviation."""
        return self.f_effective / self.delta_f

    @property
    def saturated(self) -> bool:
        """True when the swing cannot carry the crosstalk past the band
        edge at any sweep rate: every period overlaps completely."""
        return self.pi >= SATURATION_PI

    @classmethod
    def from_pi(cls, pi, delta_f):
        return cls(f_upper=pi * delta_f, delta_f=delta_f)


@dataclass(frozen=True)
class OverlapResult:
    """Overlap share of one sweep period and the |displacement| it spans."""
    probability: float
    min_displacement: float
    max_displacement: float


def round_trip_delay(reach, group_index):
    """Round-trip time in s from the source to a reflection and back."""
    if not reach > 0:
        raise ContractError(f"reach must be > 0 m, got {reach}")
    if not 1.0 < group_index < 2.0:
        raise ContractError(
            f"group_index must lie in (1, 2), got {group_index}")
    return 2.0 * reach * group_index / SPEED_OF_LIGHT


def displacement(w: SweepWaveform, delay, t):
    """Replica minus signal frequency offset in Hz at time(s) ``t``.

    The replica is the signal delayed by ``delay``; positive values put the
    crosstalk above the signal.
    """
    if np.any(np.asarray(delay) < 0):
        raise ContractError("delay must be >= 0")
    t = np.asarray(t, dtype=float) if np.ndim(t) else t
    return (instantaneous_frequency(w, t - delay)
            - instantaneous_frequency(w, t))


def _delay_fraction(delay, sweep_freq):
    x = np.asarray(delay * sweep_freq, dtype=float)
    return x - np.floor(x)


def _analytic_probability(delta_fraction, delta_f, f_eff):
    """Vectorized closed form for the ideal sawtooth."""
    delta_fraction = np.asarray(delta_fraction, dtype=float)
    near = np.where(delta_f * delta_fraction < f_eff, 1.0, 0.0)
    far = np.where(delta_f * (1.0 - delta_fraction) < f_eff, 1.0, 0.0)
    return (1.0 - delta_fraction) * near + delta_fraction * far


def overlap_probability_analytic(w: SweepWaveform, delay,
                                 spec: OverlapSpec) -> OverlapResult:
    """Closed-form overlap for the ideal sawtooth (``ramp_fraction == 0``).

    Over one period |displacement| takes ``delta_f * d`` for a share
    ``1 - d`` of the time and ``delta_f * (1 - d)`` for the share ``d``, where
    ``d`` is the delay in periods modulo one. A saturated spec (Pi >= 0.5)
    overlaps for the whole period.
    """
    if w.ramp_fraction != 0:
        raise ContractError(
            "the closed form covers the ideal sawtooth only; "
            "use overlap_probability_oracle for ramp_fraction > 0")
    d = float(_delay_fraction(delay, w.sweep_freq))
    probability = float(_analytic_probability(d, w.delta_f, spec.f_effective))
    if spec.saturated:
        probability = 1.0
    branches = [w.delta_f * d]
    if d > 0:
        branches.append(w.delta_f * (1.0 - d))
    return OverlapResult(probability, min(branches), max(branches))


def overlap_probability_oracle(w: SweepWaveform, delay, spec: OverlapSpec,
                               n_samples=DEFAULT_ORACLE_SAMPLES) -> OverlapResult:
    """Brute-force overlap on a uniform grid of ``n_samples`` over one period.

    Deterministic, and the only evaluator for waveforms with a falling ramp.
    """
    if n_samples < MIN_ORACLE_SAMPLES:
        raise ContractError(
            f"n_samples must be >= {MIN_ORACLE_SAMPLES}, got {n_samples}")
    t = np.arange(n_samples) * (w.period / n_samples)
    gap = np.abs(displacement(w, delay, t))
    hits = np.count_nonzero(gap < spec.f_effective)
    probability = 1.0 if spec.saturated else hits / n_samples
    return OverlapResult(probability, float(gap.min()), float(gap.max()))


def overlap_probability(w: SweepWaveform, delay, spec: OverlapSpec,
                        n_samples=DEFAULT_ORACLE_SAMPLES) -> float:
    """Overlap probability, picking the closed form when it applies."""
    if w.ramp_fraction == 0:
        return overlap_probability_analytic(w, delay, spec).probability
    return overlap_probability_oracle(w, delay, spec, n_samples).probability


def optimal_sweep_frequency(delay):
    """Sweep rate that keeps the replica half a period away: 1 / (2 delay).

    This maximizes the worst-case displacement of the ideal sawtooth
    (``delta_f / 2`` over the whole period).
    """
    if not delay > 0:
        raise ContractError(f"delay must be > 0 s, got {delay}")
    return 1.0 / (2.0 * delay)


def probability_curve(freqs, delay, spec: OverlapSpec, ramp_fraction=0.0,
                      n_samples=DEFAULT_ORACLE_SAMPLES):
    """Overlap probability at every sweep frequency in ``freqs``."""
    freqs = np.asarray(freqs, dtype=float)
    if ramp_fraction == 0:
        d = _delay_fraction(delay, freqs)
        if spec.saturated:
            return np.ones_like(freqs)
        return _analytic_probability(d, spec.delta_f, spec.f_effective)
    return np.array([
        overlap_probability_oracle(
            SweepWaveform(spec.delta_f, f, ramp_fraction), delay, spec,
            n_samples).probability
        for f in freqs])


def frequency_grid(f_lo, f_hi, f_step=None,
                   points_per_decade=DEFAULT_POINTS_PER_DECADE):
    """Linear grid when ``f_step`` is given, otherwise logarithmic."""
    if not 0 < f_lo < f_hi:
        raise ContractError(f"need 0 < f_lo < f_hi, got {f_lo}, {f_hi}")
    if f_step is not None:
        if not f_step > 0:
            raise ContractError(f"f_step must be > 0, got {f_step}")
        count = int(math.floor((f_hi - f_lo) / f_step + 1e-9)) + 1
        grid = f_lo + f_step * np.arange(count)
        if grid[-1] < f_hi:
            grid = np.append(grid, f_hi)
        return grid
    if points_per_decade < 1:
        raise ContractError("points_per_decade must be >= 1")
    count = int(math.ceil(math.log10(f_hi / f_lo) * points_per_decade)) + 1
    return np.geomspace(f_lo, f_hi, count)


def _refine_edge(inside, outside, compatible, tolerance):
    """Bisect between a compatible and an incompatible frequency."""
    while abs(outside - inside) > tolerance:
        mid = 0.5 * (inside + outside)
        if compatible(mid):
            inside = mid
        else:
            outside = mid
    return inside


def sweep_frequency_range(delay, spec: OverlapSpec, ramp_fraction=0.0,
                          threshold=1.0 / 32, f_lo=None, f_hi=None,
                          f_step=None, points_per_decade=DEFAULT_POINTS_PER_DECADE,
                          n_samples=DEFAULT_ORACLE_SAMPLES) -> List[FrequencyInterval]:
    """Maximal sweep-frequency intervals whose overlap stays <= ``threshold``.

    The grid is scanned first, then every interval edge is bisected to within
    one hundredth of the local grid step. Defaults scan 0.25x to 10x the
    optimal sweep frequency. An empty list means no compatible frequency.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ContractError(f"threshold must lie in [0, 1], got {threshold}")
    f_opt = optimal_sweep_frequency(delay)
    f_lo = 0.25 * f_opt if f_lo is None else f_lo
    f_hi = 10.0 * f_opt if f_hi is None else f_hi
    grid = frequency_grid(f_lo, f_hi, f_step, points_per_decade)
    ok = probability_curve(grid, delay, spec, ramp_fraction, n_samples) <= threshold

    def compatible(f):
        return probability_curve([f], delay, spec, ramp_fraction,
                                 n_samples)[0] <= threshold

    intervals = []
    edges = np.flatnonzero(np.diff(ok.astype(np.int8)))
    starts = [0] if ok[0] else []
    stops = []
    for i in edges:
        if ok[i + 1]:
            starts.append(i + 1)
        else:
            stops.append(i)
    if ok[-1]:
        stops.append(len(grid) - 1)
    for a, b in zip(starts, stops):
        lo, hi = grid[a], grid[b]
        if a > 0:
            tol = (grid[a] - grid[a - 1]) / 100.0
            lo = _refine_edge(grid[a], grid[a - 1], compatible, tol)
        if b < len(grid) - 1:
            tol = (grid[b + 1] - grid[b]) / 100.0
            hi = _refine_edge(grid[b], grid[b + 1], compatible, tol)
        if hi > lo:
            intervals.append(FrequencyInterval(float(lo), float(hi)))
    if not intervals:
        logger.info("no compatible sweep frequency for delay %.3g s "
                    "(pi_eff %.3f)", delay, spec.pi)
    return merge_intervals(intervals)
