# libs/core/planner.py
"""Sweep planning over an optical distribution network with several
Fresnel reflections.

Each reflection admits its own set of sweep frequencies (its SFR); the
planner intersects them and picks one common sweep frequency, kappa.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from libs.core.overlap import (DEFAULT_ORACLE_SAMPLES, DEFAULT_POINTS_PER_DECADE,
                               OverlapSpec, ReflectionPoint, frequency_grid,
                               optimal_sweep_frequency, overlap_probability_oracle,
                               probability_curve, round_trip_delay,
                               sweep_frequency_range)
from libs.core.waveform import SweepWaveform
from libs.utils.errors import ContractError
from libs.utils.intervals import FrequencyInterval, intersect_all

logger = logging.getLogger(__name__)

# Common intervals whose widths differ by less than this share tie.
WIDTH_TIE_TOLERANCE = 1e-3


class PlanStatus(Enum):
    OK = 'ok'
    NO_COMMON_FREQUENCY = 'no_common_frequency'


@dataclass(frozen=True)
class OdnProfile:
    """Passive fiber plant seen from the swept source.

    Attributes:
        group_index: Group refractive index of the fiber.
        reflections: Discrete reflections, ordered by reach.
        feeder_length: Total fiber length in m, used for loss bookkeeping.
        excess_loss: Extra passive loss in dB.
    """
    group_index: float = 1.4683
    reflections: Tuple[ReflectionPoint, ...] = ()
    feeder_length: float = 15200.0
    excess_loss: float = 0.0

    def __post_init__(self):
        if not 1.0 < self.group_index < 2.0:
            raise ContractError(
                f"group_index must lie in (1, 2), got {self.group_index}")
        if self.feeder_length < 0:
            raise ContractError(
                f"feeder_length must be >= 0, got {self.feeder_length}")
        object.__setattr__(self, 'reflections', tuple(self.reflections))
        duplicates = [r for r, n in Counter(
            fr.reach for fr in self.reflections).items() if n > 1]
        if duplicates:
            logger.warning("duplicate reflection reaches: %s", duplicates)

    @classmethod
    def single(cls, reach, group_index=1.4683, reflectance=-14.7):
        return cls(group_index, (ReflectionPoint(reach, reflectance),))

    def delay(self, reflection: ReflectionPoint) -> float:
        return round_trip_delay(reflection.reach, self.group_index)

    def delays(self) -> List[float]:
        return [self.delay(fr) for fr in self.reflections]


@dataclass(frozen=True)
class ScanGrid:
    """Sweep-frequency scan; None bounds are derived from the reflections."""
    f_lo: Optional[float] = None
    f_hi: Optional[float] = None
    f_step: Optional[float] = None
    points_per_decade: int = DEFAULT_POINTS_PER_DECADE

    def bounds(self, delays: Sequence[float]) -> Tuple[float, float]:
        f_opts = [optimal_sweep_frequency(d) for d in delays]
        f_lo = 0.25 * min(f_opts) if self.f_lo is None else self.f_lo
        f_hi = 10.0 * max(f_opts) if self.f_hi is None else self.f_hi
        return f_lo, f_hi

    def merge_tolerance(self, f_lo) -> float:
        """One hundredth of the finest grid step."""
        if self.f_step is not None:
            return self.f_step / 100.0
        return f_lo * (10.0 ** (1.0 / self.points_per_decade) - 1.0) / 100.0

    def grid(self, delays: Sequence[float]) -> np.ndarray:
        f_lo, f_hi = self.bounds(delays)
        return frequency_grid(f_lo, f_hi, self.f_step, self.points_per_decade)


@dataclass(frozen=True)
class ReflectionPlan:
    reach: float
    delay: float
    f_opt: float
    sfr_intervals: Tuple[FrequencyInterval, ...]


@dataclass
class SweepPlan:
    per_fr: List[ReflectionPlan]
    common_intervals: List[FrequencyInterval]
    chosen_frequency: Optional[float]
    worst_overlap: Optional[float]
    spec_used: OverlapSpec
    ramp_fraction: float
    threshold: float
    status: PlanStatus = PlanStatus.OK

    @property
    def max_required_frequency(self) -> float:
        """Highest optimal sweep frequency; the closest reflection sets it."""
        return max(p.f_opt for p in self.per_fr)

    @property
    def has_kappa(self) -> bool:
        return self.chosen_frequency is not None


@dataclass
class OverlapMap:
    """Overlap probability over sweep frequency and a second axis.

    ``probabilities[i, j]`` belongs to ``axis_values[i]`` and
    ``frequencies[j]``. ``axis`` is ``'pi'`` or ``'reach'``.
    """
    frequencies: np.ndarray
    axis: str
    axis_values: np.ndarray
    probabilities: np.ndarray = field(repr=False)


def effective_upper_frequency(signal_bandwidth, lock_guard):
    """Band edge seen by the overlap test: signal bandwidth plus lock guard.

    Divide by the sweep deviation to get the effective Pi.
    """
    if signal_bandwidth < 0 or lock_guard < 0:
        raise ContractError(
            "signal_bandwidth and lock_guard must both be >= 0, "
            f"got {signal_bandwidth}, {lock_guard}")
    return signal_bandwidth + lock_guard


def _pick_kappa(common: Sequence[FrequencyInterval]) -> Optional[float]:
    if not common:
        return None
    widest = max(iv.width for iv in common)
    for iv in common:
        if iv.width >= widest * (1.0 - WIDTH_TIE_TOLERANCE):
            return iv.midpoint
    return None


def plan_common_sweep(odn: OdnProfile, spec: OverlapSpec, ramp_fraction=0.0,
                      threshold=1.0 / 32, scan: ScanGrid = ScanGrid(),
                      n_samples=DEFAULT_ORACLE_SAMPLES) -> SweepPlan:
    """Intersect the per-reflection SFRs and choose a common sweep frequency.

    kappa is the midpoint of the widest common interval; near-equal widths
    resolve to the lowest frequency. An empty intersection yields a plan
    with status ``NO_COMMON_FREQUENCY`` and no kappa.
    """
    if not odn.reflections:
        raise ContractError("planning needs at least one reflection")
    delays = odn.delays()
    f_lo, f_hi = scan.bounds(delays)
    tolerance = scan.merge_tolerance(f_lo)
    logger.info("planning %d reflection(s) over %.6g..%.6g Hz, pi_eff %.4f",
                len(delays), f_lo, f_hi, spec.pi)

    per_fr = []
    for fr, delay in zip(odn.reflections, delays):
        sfr = sweep_frequency_range(
            delay, spec, ramp_fraction, threshold, f_lo, f_hi, scan.f_step,
            scan.points_per_decade, n_samples)
        if not sfr:
            logger.warning("reflection at %.1f m has an empty SFR", fr.reach)
        per_fr.append(ReflectionPlan(fr.reach, delay,
                                     optimal_sweep_frequency(delay), tuple(sfr)))

    common = intersect_all([p.sfr_intervals for p in per_fr], tolerance)
    kappa = _pick_kappa(common)
    if kappa is None:
        logger.warning("no compatible sweep frequency across %d reflections",
                       len(per_fr))
        return SweepPlan(per_fr, common, None, None, spec, ramp_fraction,
                         threshold, PlanStatus.NO_COMMON_FREQUENCY)

    worst = max(
        overlap_probability_oracle(
            SweepWaveform(spec.delta_f, kappa, ramp_fraction), d, spec,
            n_samples).probability
        for d in delays)
    logger.info("kappa = %.6g Hz, worst overlap %.4g", kappa, worst)
    return SweepPlan(per_fr, common, kappa, worst, spec, ramp_fraction,
                     threshold)


def overlap_map(odn: OdnProfile, frequencies, delta_f, axis='pi',
                pi_values=(0.0, 0.1, 0.2, 0.3, 0.4, 0.5), pi=0.4,
                ramp_fraction=0.0, n_samples=DEFAULT_ORACLE_SAMPLES) -> OverlapMap:
    """Overlap probability maps.

    Args:
        odn: Reflections to evaluate.
        frequencies: Sweep-frequency grid in Hz.
        delta_f: Sweep deviation in Hz.
        axis: ``'pi'`` gives one row per Pi value holding the worst case over
            all reflections; ``'reach'`` gives one row per reflection at ``pi``.
        pi_values: Rows of a ``'pi'`` map.
        pi: Fixed Pi of a ``'reach'`` map.

    Returns:
        OverlapMap with values in [0, 1].
    """
    frequencies = np.asarray(frequencies, dtype=float)
    if frequencies.size == 0:
        raise ContractError("overlap_map needs a nonempty frequency grid")
    if not odn.reflections:
        raise ContractError("overlap_map needs at least one reflection")
    delays = odn.delays()

    def row(spec, delay_set):
        curves = [probability_curve(frequencies, d, spec, ramp_fraction,
                                    n_samples) for d in delay_set]
        return np.max(curves, axis=0)

    if axis == 'pi':
        values = np.asarray(pi_values, dtype=float)
        if values.size == 0:
            raise ContractError("overlap_map needs at least one pi value")
        rows = [row(OverlapSpec.from_pi(p, delta_f), delays) for p in values]
    elif axis == 'reach':
        values = np.array([fr.reach for fr in odn.reflections])
        spec = OverlapSpec.from_pi(pi, delta_f)
        rows = [row(spec, [d]) for d in delays]
    else:
        raise ContractError(f"axis must be 'pi' or 'reach', got {axis!r}")
    logger.debug("overlap map: %d x %d", len(rows), frequencies.size)
    return OverlapMap(frequencies, axis, values, np.vstack(rows))


def scan_frequency_grid(odn: OdnProfile, scan: ScanGrid = ScanGrid()) -> np.ndarray:
    """Frequencies the planner scans: linear with ``scan.f_step``, else logarithmic."""
    return scan.grid(odn.delays())
